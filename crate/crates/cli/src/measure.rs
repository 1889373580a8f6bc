use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context as _};
use infolab::formats::{read_distribution, read_joint, read_triple};
use infolab::measures::{conditional_entropy, conditional_mutual_information, entropy, joint_entropy};
use infolab::{kl_divergence, mutual_information, ExtendedReal, MiMethod};
use serde::Serialize;

use crate::output::{self, Context, Format};
use crate::Verdict;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Which quantity to compute
    #[arg(value_enum)]
    measure: Measure,

    /// Distribution files for `entropy` and `kl`, a joint for `mi`,
    /// `cond_entropy` and `joint_entropy`, a triple for `cond_mi`
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum Measure {
    Entropy,
    Kl,
    Mi,
    #[value(name = "cond_entropy", alias = "cond-entropy")]
    CondEntropy,
    #[value(name = "joint_entropy", alias = "joint-entropy")]
    JointEntropy,
    #[value(name = "cond_mi", alias = "cond-mi")]
    CondMi,
}

impl Measure {
    fn name(self) -> &'static str {
        match self {
            Self::Entropy => "entropy",
            Self::Kl => "kl",
            Self::Mi => "mi",
            Self::CondEntropy => "cond_entropy",
            Self::JointEntropy => "joint_entropy",
            Self::CondMi => "cond_mi",
        }
    }

    fn arity(self) -> usize {
        match self {
            Self::Kl => 2,
            _ => 1,
        }
    }
}

#[derive(Serialize)]
struct Report {
    measure: &'static str,
    base: &'static str,
    value: ExtendedReal<f64>,
}

pub fn run(ctx: &Context, args: Args, out: &mut dyn Write) -> anyhow::Result<Verdict> {
    let m = args.measure;
    if args.files.len() != m.arity() {
        bail!(
            "{} takes {} input file(s), got {}",
            m.name(),
            m.arity(),
            args.files.len()
        );
    }
    let first = &args.files[0];
    let nats = match m {
        Measure::Entropy => ExtendedReal::Finite(entropy(&read_distribution::<f64>(first)?)),
        Measure::Kl => {
            let p = read_distribution::<f64>(first)?;
            let q = read_distribution::<f64>(&args.files[1])?;
            kl_divergence(&p, &q).context("p and q must share an alphabet")?
        }
        Measure::Mi => ExtendedReal::Finite(mutual_information(&read_joint::<f64>(first)?, MiMethod::Definition)),
        Measure::CondEntropy => ExtendedReal::Finite(conditional_entropy(&read_joint::<f64>(first)?)),
        Measure::JointEntropy => ExtendedReal::Finite(joint_entropy(&read_joint::<f64>(first)?)),
        Measure::CondMi => ExtendedReal::Finite(conditional_mutual_information(&read_triple::<f64>(first)?)),
    };
    let value = ctx.convert_ext(nats);
    match ctx.format {
        Format::Text => writeln!(out, "{} {}", output::fixed_ext(value), ctx.unit())?,
        Format::Json => output::json(
            out,
            &Report {
                measure: m.name(),
                base: ctx.unit(),
                value,
            },
        )?,
        Format::Csv => {
            let mut w = output::csv_writer(out);
            w.write_record(["measure", "base", "value"])?;
            w.write_record([m.name(), ctx.unit(), &value.to_string()])?;
            w.flush()?;
        }
    }
    Ok(Verdict::Pass)
}
