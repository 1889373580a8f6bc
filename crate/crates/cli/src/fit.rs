use std::io::Write;
use std::path::PathBuf;

use anyhow::bail;
use infolab::formats::{infer_alphabet, read_samples, DistributionFile, Samples};
use infolab::mle::{self, Categorical, ExponentialTilt, FitMode, FitResult, ParametricFamily, DEFAULT_FIT_TOL};
use infolab::Alphabet;
use serde::Serialize;

use crate::output::{self, Context, Format};
use crate::Verdict;

#[derive(clap::Args, Debug)]
pub struct Args {
    #[arg(value_enum)]
    family: FamilyArg,

    /// Sample CSV, one label per line
    data: PathBuf,

    #[arg(long, value_enum, default_value = "both")]
    mode: ModeArg,

    /// Bracket width at which the line search stops
    #[arg(long, default_value_t = DEFAULT_FIT_TOL)]
    tol: f64,

    /// Comma-separated alphabet, in order; inferred from the data otherwise
    #[arg(long)]
    alphabet: Option<String>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    Categorical,
    Tilt,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModeArg {
    #[value(name = "max_likelihood", alias = "max-likelihood")]
    MaxLikelihood,
    #[value(name = "min_divergence", alias = "min-divergence")]
    MinDivergence,
    Both,
}

#[derive(Serialize)]
struct FitOut {
    #[serde(flatten)]
    result: FitResult<f64>,
    fitted: DistributionFile,
}

#[derive(Serialize)]
struct Report {
    base: &'static str,
    samples: usize,
    fits: Vec<FitOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_theta_difference: Option<f64>,
}

pub fn run(ctx: &Context, args: Args, out: &mut dyn Write) -> anyhow::Result<Verdict> {
    let Samples::Univariate(data) = read_samples(&args.data)? else {
        bail!("{}: fitting needs one label per line", args.data.display());
    };
    let alphabet = match &args.alphabet {
        Some(list) => Alphabet::new(list.split(',').map(str::trim))?,
        None => infer_alphabet(data.iter().map(String::as_str))?,
    };
    let family: Box<dyn ParametricFamily<f64>> = match args.family {
        FamilyArg::Categorical => Box::new(Categorical::new(alphabet)),
        FamilyArg::Tilt => Box::new(ExponentialTilt::<f64>::indexed(alphabet)),
    };
    let modes: &[FitMode] = match args.mode {
        ModeArg::MaxLikelihood => &[FitMode::MaxLikelihood],
        ModeArg::MinDivergence => &[FitMode::MinDivergence],
        ModeArg::Both => &[FitMode::MaxLikelihood, FitMode::MinDivergence],
    };
    let mut fits = Vec::new();
    for &mode in modes {
        let mut result = mle::fit(family.as_ref(), &data, mode, args.tol)?;
        let fitted = DistributionFile::from_distribution(&family.evaluate(&result.theta_star)?);
        result.objective_value = ctx.convert_ext(result.objective_value);
        fits.push(FitOut { result, fitted });
    }
    let max_theta_difference = (fits.len() == 2).then(|| {
        fits[0]
            .result
            .theta_star
            .iter()
            .zip(&fits[1].result.theta_star)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    });
    let converged = fits.iter().all(|f| f.result.converged);

    match ctx.format {
        Format::Json => output::json(
            out,
            &Report {
                base: ctx.unit(),
                samples: data.len(),
                fits,
                max_theta_difference,
            },
        )?,
        Format::Csv => {
            let mut w = output::csv_writer(out);
            w.write_record(["family", "mode", "theta_star", "objective_value", "iterations", "converged"])?;
            for f in &fits {
                let r = &f.result;
                let theta: Vec<String> = r.theta_star.iter().map(f64::to_string).collect();
                w.write_record([
                    r.family.clone(),
                    mode_name(r.mode).to_string(),
                    theta.join(" "),
                    r.objective_value.to_string(),
                    r.iterations.to_string(),
                    r.converged.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for f in &fits {
                let r = &f.result;
                let theta: Vec<String> = r.theta_star.iter().map(|&t| output::fixed(t)).collect();
                writeln!(
                    out,
                    "{} {}: theta* = [{}], objective {} {}, {} iterations, {}",
                    r.family,
                    mode_name(r.mode),
                    theta.join(", "),
                    output::fixed_ext(r.objective_value),
                    ctx.unit(),
                    r.iterations,
                    if r.converged { "converged" } else { "not converged" }
                )?;
            }
            if let Some(d) = max_theta_difference {
                writeln!(out, "max |theta_ml - theta_kl| = {d:.3e}")?;
            }
        }
    }
    Ok(if converged { Verdict::Pass } else { Verdict::Fail })
}

fn mode_name(mode: FitMode) -> &'static str {
    match mode {
        FitMode::MaxLikelihood => "max_likelihood",
        FitMode::MinDivergence => "min_divergence",
    }
}
