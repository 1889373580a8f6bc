use std::io::Write;

use infolab::{ExtendedReal, LogBase};
use serde::Serialize;

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub struct Context {
    pub base: LogBase,
    pub seed: u64,
    pub format: Format,
    pub cap: u128,
}

impl Context {
    pub fn convert(&self, nats: f64) -> f64 {
        self.base.from_nats(nats)
    }

    pub fn convert_ext(&self, nats: ExtendedReal<f64>) -> ExtendedReal<f64> {
        nats.in_base(self.base)
    }

    pub fn unit(&self) -> &'static str {
        self.base.unit()
    }
}

pub fn json<T: Serialize>(out: &mut dyn Write, value: &T) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::Writer::from_writer(out)
}

pub fn fixed(v: f64) -> String {
    format!("{v:.6}")
}

pub fn fixed_ext(v: ExtendedReal<f64>) -> String {
    format!("{v:.6}")
}
