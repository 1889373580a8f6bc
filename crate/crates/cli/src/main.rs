use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use infolab::types_lab::DEFAULT_TYPE_CAP;
use infolab::LogBase;

mod dpi;
mod fit;
mod game;
mod measure;
mod output;
mod types;

use output::{Context, Format};

/// Information-theory laboratory on finite alphabets.
///
/// Exit status: 0 on success, 1 on bad input, 2 when a verification or
/// fit fails.
#[derive(Parser, Debug)]
#[command(name = "infolab", version)]
struct Cli {
    /// Unit for information quantities
    #[arg(long, global = true, value_enum, default_value = "nats")]
    base: BaseArg,

    /// Seed for every stochastic step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value = "text")]
    output: Format,

    /// Largest number of types to enumerate
    #[arg(long, global = true, default_value_t = DEFAULT_TYPE_CAP)]
    cap: u128,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum BaseArg {
    Nats,
    Bits,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entropy, divergence and mutual information of JSON inputs
    Measure(measure::Args),
    /// Exhaustive method-of-types checks
    Types(types::Args),
    /// Fit a parametric family to samples
    Fit(fit::Args),
    /// Play the log-loss prediction game
    Game(game::Args),
    /// Data processing inequality reports
    Dpi(dpi::Args),
}

/// How a command that ran to completion turned out.
pub enum Verdict {
    Pass,
    Fail,
}

fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<Verdict> {
    let ctx = Context {
        base: match cli.base {
            BaseArg::Nats => LogBase::Nats,
            BaseArg::Bits => LogBase::Bits,
        },
        seed: cli.seed,
        format: cli.output,
        cap: cli.cap,
    };
    match cli.command {
        Command::Measure(args) => measure::run(&ctx, args, out),
        Command::Types(args) => types::run(&ctx, args, out),
        Command::Fit(args) => fit::run(&ctx, args, out),
        Command::Game(args) => game::run(&ctx, args, out),
        Command::Dpi(args) => dpi::run(&ctx, args, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let verdict = run(cli, &mut out);
    let flushed = out.flush();
    match (verdict, flushed) {
        (Err(e), _) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        (Ok(_), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        (Ok(Verdict::Pass), Ok(())) => ExitCode::SUCCESS,
        (Ok(Verdict::Fail), Ok(())) => ExitCode::from(2),
    }
}
