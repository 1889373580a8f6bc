use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail};
use infolab::formats::{read_distribution, read_json, DataFile};
use infolab::scoring::{play_game, play_game_with_side_info, GameRecord, PredictionEntry, RoundRecord, Strategy};
use infolab::{ExtendedReal, NormalizationPolicy};
use serde::Serialize;

use crate::output::{self, Context, Format};
use crate::Verdict;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Deck (distribution) or joint file; a joint reveals its second
    /// variable as side information
    file: PathBuf,

    /// optimal, uniform, marginal or stubborn:<distribution-file>
    #[arg(long, default_value = "optimal")]
    strategy: String,

    #[arg(long, default_value_t = 100_000)]
    rounds: usize,

    /// Include every round in the output
    #[arg(long)]
    trace: bool,
}

#[derive(Serialize)]
struct GameOut<'a> {
    game: &'static str,
    strategy: &'a str,
    rounds: usize,
    seed: u64,
    base: &'static str,
    average_loss: ExtendedReal<f64>,
    infinite_rounds: usize,
    sample_std: ExtendedReal<f64>,
    standard_error: ExtendedReal<f64>,
    predictions: &'a [PredictionEntry<f64>],
    #[serde(skip_serializing_if = "Option::is_none")]
    per_round: Option<Vec<RoundRecord<f64>>>,
}

fn parse_strategy(name: &str) -> anyhow::Result<Strategy<f64>> {
    Ok(match name {
        "optimal" => Strategy::Optimal,
        "uniform" => Strategy::Uniform,
        "marginal" => Strategy::IgnoreSideInfo,
        other => match other.strip_prefix("stubborn:") {
            Some(path) if !path.is_empty() => Strategy::Stubborn(read_distribution(path)?),
            _ => bail!("unknown strategy {other:?}; expected optimal, uniform, marginal or stubborn:<file>"),
        },
    })
}

pub fn run(ctx: &Context, args: Args, out: &mut dyn Write) -> anyhow::Result<Verdict> {
    let strategy = parse_strategy(&args.strategy)?;
    let (game, record): (_, GameRecord<f64>) = match read_json(&args.file)? {
        DataFile::Distribution(f) => (
            "deck",
            play_game(&f.to_distribution(NormalizationPolicy::Strict)?, &strategy, args.rounds, ctx.seed)?,
        ),
        DataFile::Joint(f) => (
            "side_info",
            play_game_with_side_info(&f.to_joint(NormalizationPolicy::Strict)?, &strategy, args.rounds, ctx.seed)?,
        ),
        other => {
            return Err(anyhow!(
                "{}: expected a distribution or joint file, found a {} file",
                args.file.display(),
                other.kind()
            ))
        }
    };
    let convert = |r: &RoundRecord<f64>| RoundRecord {
        loss: ctx.convert_ext(r.loss),
        ..r.clone()
    };
    let view = GameOut {
        game,
        strategy: &args.strategy,
        rounds: record.rounds,
        seed: record.seed,
        base: ctx.unit(),
        average_loss: ctx.convert_ext(record.average_loss),
        infinite_rounds: record.infinite_rounds,
        sample_std: ctx.convert_ext(record.sample_std),
        standard_error: ctx.convert_ext(record.standard_error),
        predictions: &record.predictions,
        per_round: args.trace.then(|| record.per_round.iter().map(convert).collect()),
    };

    match ctx.format {
        Format::Json => output::json(out, &view)?,
        Format::Csv => {
            let mut w = output::csv_writer(out);
            if args.trace {
                w.write_record(["round", "outcome", "side_info", "prediction", "loss"])?;
                for (i, r) in record.per_round.iter().enumerate() {
                    w.write_record([
                        i.to_string(),
                        r.outcome.clone(),
                        r.side_info.clone().unwrap_or_default(),
                        r.prediction.to_string(),
                        ctx.convert_ext(r.loss).to_string(),
                    ])?;
                }
            } else {
                w.write_record(["strategy", "rounds", "seed", "average_loss", "standard_error", "infinite_rounds"])?;
                w.write_record([
                    args.strategy.clone(),
                    view.rounds.to_string(),
                    view.seed.to_string(),
                    view.average_loss.to_string(),
                    view.standard_error.to_string(),
                    view.infinite_rounds.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(
                out,
                "average loss {} {} (standard error {}), {} rounds, strategy {}, seed {}",
                output::fixed_ext(view.average_loss),
                ctx.unit(),
                output::fixed_ext(view.standard_error),
                view.rounds,
                args.strategy,
                view.seed
            )?;
            if view.infinite_rounds > 0 {
                writeln!(out, "{} rounds scored an infinite loss", view.infinite_rounds)?;
            }
            if args.trace {
                for (i, r) in record.per_round.iter().enumerate() {
                    let side = r.side_info.as_deref().map(|s| format!(" | {s}")).unwrap_or_default();
                    writeln!(out, "{i:>8}  {}{side}  {}", r.outcome, output::fixed_ext(ctx.convert_ext(r.loss)))?;
                }
            }
        }
    }
    Ok(Verdict::Pass)
}
