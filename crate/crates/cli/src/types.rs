use std::io::Write;
use std::path::PathBuf;

use anyhow::bail;
use infolab::formats::read_distribution;
use infolab::types_lab::{
    sample_types, surprise_rate_convergence, verify_chernoff, write_reports_csv, ChernoffSummary, TypeHistogram,
};
use infolab::ExtendedReal;
use serde::Serialize;

use crate::output::{self, Context, Format};
use crate::Verdict;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Distribution file for the source q
    q: PathBuf,

    /// Number of draws
    #[arg(long)]
    n: u64,

    /// Distribution file for the target type direction p
    #[arg(long)]
    p: Option<PathBuf>,

    /// Rate table at n, 10n and 100n for the type nearest p
    #[arg(long, requires = "p")]
    rate: bool,

    /// Per-type CSV report instead of the summary
    #[arg(long)]
    csv: bool,

    /// Monte Carlo histogram of observed types over this many trials
    #[arg(long)]
    sample: Option<u64>,
}

#[derive(Serialize)]
struct RateOut {
    n: u64,
    counts: Vec<u64>,
    rate: ExtendedReal<f64>,
    type_divergence: ExtendedReal<f64>,
    divergence: ExtendedReal<f64>,
    gap: f64,
    gap_bound: f64,
    within_bound: bool,
}

#[derive(Serialize)]
struct Report {
    base: &'static str,
    seed: u64,
    chernoff: ChernoffSummary<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rate: Option<Vec<RateOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sample: Option<TypeHistogram>,
}

pub fn run(ctx: &Context, args: Args, out: &mut dyn Write) -> anyhow::Result<Verdict> {
    if args.n == 0 {
        bail!("--n must be at least 1");
    }
    let q = read_distribution::<f64>(&args.q)?;
    let summary = verify_chernoff(args.n, &q, ctx.cap)?;
    let mut passed = summary.passed();

    if args.csv || ctx.format == Format::Csv {
        write_reports_csv(&summary.reports, &mut *out)?;
        return Ok(if passed { Verdict::Pass } else { Verdict::Fail });
    }

    let rate = match (&args.p, args.rate) {
        (Some(path), true) => {
            let p = read_distribution::<f64>(path)?;
            let ns = [args.n, args.n.saturating_mul(10), args.n.saturating_mul(100)];
            let rows = surprise_rate_convergence(&p, &q, &ns)?;
            passed &= rows.iter().all(|r| r.within_bound);
            Some(
                rows.into_iter()
                    .map(|r| RateOut {
                        n: r.n,
                        counts: r.counts,
                        rate: ctx.convert_ext(r.rate),
                        type_divergence: ctx.convert_ext(r.type_divergence),
                        divergence: ctx.convert_ext(r.divergence),
                        gap: ctx.convert(r.gap),
                        gap_bound: ctx.convert(r.gap_bound),
                        within_bound: r.within_bound,
                    })
                    .collect::<Vec<_>>(),
            )
        }
        _ => None,
    };
    let sample = match args.sample {
        Some(trials) => Some(sample_types(&q, args.n, trials, ctx.seed)?),
        None => None,
    };

    if ctx.format == Format::Json {
        output::json(
            out,
            &Report {
                base: ctx.unit(),
                seed: ctx.seed,
                chernoff: summary,
                rate,
                sample,
            },
        )?;
    } else {
        let violated = summary.types_checked - summary.types_holding;
        if violated == 0 {
            writeln!(out, "{} types checked, all bounds hold", summary.types_checked)?;
        } else {
            writeln!(out, "{} types checked, {violated} bounds violated", summary.types_checked)?;
        }
        writeln!(out, "total probability {}", output::fixed(summary.total_probability))?;
        if let Some(rows) = &rate {
            writeln!(out, "divergence d(p,q) = {} {}", output::fixed_ext(rows[0].divergence), ctx.unit())?;
            writeln!(out, "{:>8}  {:>12}  {:>12}  {:>12}  {:>12}", "n", "rate", "d(type,q)", "gap", "bound")?;
            for r in rows {
                writeln!(
                    out,
                    "{:>8}  {:>12}  {:>12}  {:>12}  {:>12}",
                    r.n,
                    output::fixed_ext(r.rate),
                    output::fixed_ext(r.type_divergence),
                    output::fixed(r.gap),
                    output::fixed(r.gap_bound)
                )?;
            }
        }
        if let Some(h) = &sample {
            writeln!(out, "{} trials of n = {}, seed {}", h.trials, h.n, h.seed)?;
            for bin in &h.bins {
                let counts: Vec<String> = bin.counts.iter().map(u64::to_string).collect();
                writeln!(out, "  ({})  {}", counts.join(", "), output::fixed(bin.frequency))?;
            }
        }
    }
    Ok(if passed { Verdict::Pass } else { Verdict::Fail })
}
