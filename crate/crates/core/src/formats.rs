//! JSON and CSV file formats.
//!
//! Distribution: `{"alphabet": [...], "probs": [...]}`.
//! Joint: `{"x_alphabet": [...], "y_alphabet": [...], "probs": [[...], ...]}`.
//! Channel: the joint layout with `"rows"` in place of `"probs"`.
//! Triple: `x_alphabet`, `y_alphabet`, `z_alphabet` and nested `probs[x][y][z]`.
//! Samples: CSV without header, one label per line or two per line.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::simplex::{Alphabet, Channel, Distribution, JointDistribution, NormalizationPolicy, TripleJoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionFile {
    pub alphabet: Vec<String>,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointFile {
    pub x_alphabet: Vec<String>,
    pub y_alphabet: Vec<String>,
    pub probs: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    #[serde(alias = "in_alphabet")]
    pub x_alphabet: Vec<String>,
    #[serde(alias = "out_alphabet")]
    pub y_alphabet: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleFile {
    pub x_alphabet: Vec<String>,
    pub y_alphabet: Vec<String>,
    pub z_alphabet: Vec<String>,
    pub probs: Vec<Vec<Vec<f64>>>,
}

/// Initial joint and the two maps for the particle dynamics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleFile {
    pub joint: JointFile,
    pub gx: ChannelFile,
    pub gy: ChannelFile,
}

impl DistributionFile {
    pub fn from_distribution<T: Scalar>(d: &Distribution<T>) -> Self {
        Self {
            alphabet: d.alphabet().labels().to_vec(),
            probs: d.probs().iter().map(|p| p.as_f64()).collect(),
        }
    }

    pub fn to_distribution<T: Scalar>(&self, policy: NormalizationPolicy) -> Result<Distribution<T>> {
        Distribution::new(Alphabet::new(self.alphabet.clone())?, lift(&self.probs), policy)
    }
}

impl JointFile {
    pub fn from_joint<T: Scalar>(j: &JointDistribution<T>) -> Self {
        Self {
            x_alphabet: j.x_alphabet().labels().to_vec(),
            y_alphabet: j.y_alphabet().labels().to_vec(),
            probs: j.to_rows().iter().map(|r| r.iter().map(|p| p.as_f64()).collect()).collect(),
        }
    }

    pub fn to_joint<T: Scalar>(&self, policy: NormalizationPolicy) -> Result<JointDistribution<T>> {
        JointDistribution::new(
            Alphabet::new(self.x_alphabet.clone())?,
            Alphabet::new(self.y_alphabet.clone())?,
            self.probs.iter().map(|r| lift(r)).collect(),
            policy,
        )
    }
}

impl ChannelFile {
    pub fn from_channel<T: Scalar>(c: &Channel<T>) -> Self {
        Self {
            x_alphabet: c.in_alphabet().labels().to_vec(),
            y_alphabet: c.out_alphabet().labels().to_vec(),
            rows: c.to_rows().iter().map(|r| r.iter().map(|p| p.as_f64()).collect()).collect(),
        }
    }

    pub fn to_channel<T: Scalar>(&self) -> Result<Channel<T>> {
        Channel::new(
            Alphabet::new(self.x_alphabet.clone())?,
            Alphabet::new(self.y_alphabet.clone())?,
            self.rows.iter().map(|r| lift(r)).collect(),
        )
    }
}

impl TripleFile {
    pub fn from_triple<T: Scalar>(t: &TripleJoint<T>) -> Self {
        Self {
            x_alphabet: t.x_alphabet().labels().to_vec(),
            y_alphabet: t.y_alphabet().labels().to_vec(),
            z_alphabet: t.z_alphabet().labels().to_vec(),
            probs: t
                .to_nested()
                .iter()
                .map(|plane| plane.iter().map(|r| r.iter().map(|p| p.as_f64()).collect()).collect())
                .collect(),
        }
    }

    pub fn to_triple<T: Scalar>(&self, policy: NormalizationPolicy) -> Result<TripleJoint<T>> {
        TripleJoint::new(
            Alphabet::new(self.x_alphabet.clone())?,
            Alphabet::new(self.y_alphabet.clone())?,
            Alphabet::new(self.z_alphabet.clone())?,
            self.probs
                .iter()
                .map(|plane| plane.iter().map(|r| lift(r)).collect())
                .collect(),
            policy,
        )
    }
}

fn lift<T: Scalar>(values: &[f64]) -> Vec<T> {
    values.iter().map(|&v| T::lit(v)).collect()
}

/// Any of the JSON layouts, told apart by their keys.
#[derive(Debug, Clone, PartialEq)]
pub enum DataFile {
    Distribution(DistributionFile),
    Joint(JointFile),
    Channel(ChannelFile),
    Triple(TripleFile),
    Particles(ParticleFile),
}

impl DataFile {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Distribution(_) => "distribution",
            Self::Joint(_) => "joint",
            Self::Channel(_) => "channel",
            Self::Triple(_) => "triple",
            Self::Particles(_) => "particles",
        }
    }
}

fn format_error(source: &str, e: impl std::fmt::Display) -> Error {
    Error::Format(format!("{source}: {e}"))
}

/// Parses JSON text; `source` names the input in error messages.
pub fn parse_json(text: &str, source: &str) -> Result<DataFile> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| format_error(source, e))?;
    let obj = value
        .as_object()
        .ok_or_else(|| format_error(source, "expected a JSON object at line 1"))?;
    let has = |k: &str| obj.contains_key(k);
    let parsed = if has("joint") {
        serde_json::from_str(text).map(DataFile::Particles)
    } else if has("z_alphabet") {
        serde_json::from_str(text).map(DataFile::Triple)
    } else if has("rows") {
        serde_json::from_str(text).map(DataFile::Channel)
    } else if has("x_alphabet") {
        serde_json::from_str(text).map(DataFile::Joint)
    } else if has("alphabet") {
        serde_json::from_str(text).map(DataFile::Distribution)
    } else {
        return Err(format_error(source, "unrecognized layout: no alphabet key"));
    };
    parsed.map_err(|e| format_error(source, e))
}

pub fn read_json(path: impl AsRef<Path>) -> Result<DataFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| format_error(&path.display().to_string(), e))?;
    parse_json(&text, &path.display().to_string())
}

fn expect_kind(file: DataFile, wanted: &str, source: &str) -> Error {
    format_error(source, format!("expected a {wanted} file, found a {} file", file.kind()))
}

pub fn read_distribution<T: Scalar>(path: impl AsRef<Path>) -> Result<Distribution<T>> {
    let source = path.as_ref().display().to_string();
    match read_json(&path)? {
        DataFile::Distribution(f) => f.to_distribution(NormalizationPolicy::Strict),
        other => Err(expect_kind(other, "distribution", &source)),
    }
}

pub fn read_joint<T: Scalar>(path: impl AsRef<Path>) -> Result<JointDistribution<T>> {
    let source = path.as_ref().display().to_string();
    match read_json(&path)? {
        DataFile::Joint(f) => f.to_joint(NormalizationPolicy::Strict),
        other => Err(expect_kind(other, "joint", &source)),
    }
}

pub fn read_channel<T: Scalar>(path: impl AsRef<Path>) -> Result<Channel<T>> {
    let source = path.as_ref().display().to_string();
    match read_json(&path)? {
        DataFile::Channel(f) => f.to_channel(),
        other => Err(expect_kind(other, "channel", &source)),
    }
}

pub fn read_triple<T: Scalar>(path: impl AsRef<Path>) -> Result<TripleJoint<T>> {
    let source = path.as_ref().display().to_string();
    match read_json(&path)? {
        DataFile::Triple(f) => f.to_triple(NormalizationPolicy::Strict),
        other => Err(expect_kind(other, "triple", &source)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Samples {
    Univariate(Vec<String>),
    Bivariate(Vec<(String, String)>),
}

impl Samples {
    pub fn len(&self) -> usize {
        match self {
            Self::Univariate(v) => v.len(),
            Self::Bivariate(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Reads header-less sample CSV. The first record fixes the arity; blank
/// lines are skipped.
pub fn parse_samples<R: Read>(reader: R, source: &str) -> Result<Samples> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut uni = Vec::new();
    let mut bi = Vec::new();
    let mut arity = None;
    for record in rdr.records() {
        let record = record.map_err(|e| format_error(source, e))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let width = record.len();
        if !(1..=2).contains(&width) {
            return Err(format_error(
                source,
                format!("line {line}: expected 1 or 2 labels, found {width}"),
            ));
        }
        let expected = *arity.get_or_insert(width);
        if width != expected {
            return Err(format_error(
                source,
                format!("line {line}: expected {expected} labels, found {width}"),
            ));
        }
        if record.iter().any(str::is_empty) {
            return Err(format_error(source, format!("line {line}: empty label")));
        }
        if width == 1 {
            uni.push(record[0].to_string());
        } else {
            bi.push((record[0].to_string(), record[1].to_string()));
        }
    }
    match arity {
        None => Err(Error::EmptySample),
        Some(1) => Ok(Samples::Univariate(uni)),
        Some(_) => Ok(Samples::Bivariate(bi)),
    }
}

pub fn read_samples(path: impl AsRef<Path>) -> Result<Samples> {
    let path = path.as_ref();
    let source = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| format_error(&source, e))?;
    parse_samples(file, &source)
}

/// Distinct labels in a stable order: numerically if every label is an
/// integer, otherwise by first appearance.
pub fn infer_alphabet<'a, I>(labels: I) -> Result<Alphabet>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut seen = Vec::new();
    for l in labels {
        if !seen.contains(&l) {
            seen.push(l);
        }
    }
    if seen.iter().all(|l| l.parse::<i64>().is_ok()) {
        seen.sort_by_key(|l| l.parse::<i64>().expect("checked above"));
    }
    Alphabet::new(seen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layouts_are_detected() {
        let d = parse_json(r#"{"alphabet": ["a", "b"], "probs": [0.5, 0.5]}"#, "d").unwrap();
        assert_eq!(d.kind(), "distribution");
        let j = parse_json(r#"{"x_alphabet": ["a"], "y_alphabet": ["b"], "probs": [[1.0]]}"#, "j").unwrap();
        assert_eq!(j.kind(), "joint");
        let c = parse_json(r#"{"in_alphabet": ["a"], "out_alphabet": ["b"], "rows": [[1.0]]}"#, "c").unwrap();
        assert_eq!(c.kind(), "channel");
    }

    #[test]
    fn json_errors_carry_line_numbers() {
        let err = parse_json("{\n  \"alphabet\": [\"a\"],\n  \"probs\": [0.5,]\n}", "bad.json").unwrap_err();
        let Error::Format(msg) = err else { panic!("{err:?}") };
        assert!(msg.starts_with("bad.json:"));
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn distribution_round_trip() {
        let d = Distribution::<f64>::new(Alphabet::suits(), vec![0.1, 0.2, 0.3, 0.4], NormalizationPolicy::Strict)
            .unwrap();
        let text = serde_json::to_string(&DistributionFile::from_distribution(&d)).unwrap();
        let DataFile::Distribution(f) = parse_json(&text, "rt").unwrap() else { panic!() };
        assert_eq!(f.to_distribution::<f64>(NormalizationPolicy::Strict).unwrap(), d);
    }

    #[test]
    fn samples_parse() {
        let s = parse_samples("a\nb\n\na\n".as_bytes(), "s").unwrap();
        assert_eq!(s, Samples::Univariate(vec!["a".into(), "b".into(), "a".into()]));
        let s = parse_samples("a, x\nb,y\n".as_bytes(), "s").unwrap();
        assert_eq!(s.len(), 2);
        let err = parse_samples("a,x\nb\n".as_bytes(), "s.csv").unwrap_err();
        assert_eq!(err, Error::Format("s.csv: line 2: expected 2 labels, found 1".into()));
        assert_eq!(parse_samples("".as_bytes(), "s").unwrap_err(), Error::EmptySample);
    }

    #[test]
    fn inferred_alphabet_order() {
        assert_eq!(infer_alphabet(["10", "2", "0", "2"]).unwrap().labels(), ["0", "2", "10"]);
        assert_eq!(infer_alphabet(["b", "a", "b"]).unwrap().labels(), ["b", "a"]);
    }
}
