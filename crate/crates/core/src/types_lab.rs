//! Exact method-of-types engine.
//!
//! Enumerates every empirical type of `n` draws, computes its exact
//! multinomial probability in log space, and checks it against the
//! divergence-exponent sandwich
//!
//! ```text
//! exp(−n d(t/n, q)) / (n+1)^m  ≤  P(t; q)  ≤  exp(−n d(t/n, q))
//! ```

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{kl_divergence, ExtendedReal};
use crate::sampling::{seeded_rng, Categorical};
use crate::scalar::{tol, Scalar};
use crate::simplex::{Alphabet, Distribution, EmpiricalType};

pub const DEFAULT_TYPE_CAP: u128 = 1_000_000;

/// Number of types of `n` draws over `m` symbols, `binom(n+m−1, m−1)`.
/// Saturates at `u128::MAX`.
pub fn count_types(n: u64, m: usize) -> u128 {
    let n = n as u128;
    let k = (m as u128).saturating_sub(1);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc * (n + i) is divisible by i at every step
        acc = match acc.checked_mul(n + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    acc
}

/// All compositions of `n` into `|alphabet|` nonnegative parts, each once.
///
/// Ordered lexicographically from the largest first count down:
/// for `n = 2, m = 2` that is `(2,0), (1,1), (0,2)`.
pub fn enumerate_types(n: u64, alphabet: &Alphabet, cap: u128) -> Result<Vec<EmpiricalType>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let m = alphabet.len();
    let count = count_types(n, m);
    if count > cap {
        return Err(Error::EnumerationTooLarge { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut counts = vec![0u64; m];
    compositions(n, 0, &mut counts, &mut |c| {
        out.push(EmpiricalType::new(alphabet.clone(), c.to_vec()).expect("counts sum to n"));
    });
    Ok(out)
}

pub(crate) fn compositions(remaining: u64, pos: usize, counts: &mut [u64], emit: &mut impl FnMut(&[u64])) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        emit(counts);
        return;
    }
    for c in (0..=remaining).rev() {
        counts[pos] = c;
        compositions(remaining - c, pos + 1, counts, emit);
    }
}

/// Table of `log k!` for `k = 0..=n`, accumulated from `log k`.
#[derive(Debug, Clone)]
pub struct LogFactorials<T> {
    table: Vec<T>,
}

impl<T: Scalar> LogFactorials<T> {
    pub fn up_to(n: u64) -> Self {
        let mut table = Vec::with_capacity(n as usize + 1);
        let mut acc = T::zero();
        table.push(acc);
        for k in 1..=n {
            acc = acc + T::lit(k as f64).ln();
            table.push(acc);
        }
        Self { table }
    }

    pub fn get(&self, k: u64) -> T {
        self.table[k as usize]
    }
}

fn log_probability_with<T: Scalar>(
    t: &EmpiricalType,
    q: &Distribution<T>,
    table: &LogFactorials<T>,
) -> ExtendedReal<T> {
    let mut total = table.get(t.n());
    for (&c, &qi) in t.counts().iter().zip(q.probs()) {
        if c == 0 {
            continue;
        }
        if qi <= T::zero() {
            return ExtendedReal::NegInfinity;
        }
        total = total - table.get(c) + T::lit(c as f64) * qi.ln();
    }
    ExtendedReal::Finite(total)
}

/// `log P(t; q) = log[n! / Π c_i! · Π q_i^{c_i}]`; `−∞` when `t` charges a
/// symbol with `q_i = 0`.
pub fn type_log_probability<T: Scalar>(t: &EmpiricalType, q: &Distribution<T>) -> Result<ExtendedReal<T>> {
    t.alphabet().ensure_same(q.alphabet())?;
    Ok(log_probability_with(t, q, &LogFactorials::up_to(t.n())))
}

/// One type checked against the sandwich.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct BoundReport<T> {
    pub counts: Vec<u64>,
    pub n: u64,
    pub exact_log_prob: ExtendedReal<T>,
    pub lower_log_bound: ExtendedReal<T>,
    pub upper_log_bound: ExtendedReal<T>,
    pub holds: bool,
}

impl<T: Scalar> BoundReport<T> {
    /// `min(exact − lower, upper − exact)`; negative on a violation, `None`
    /// for impossible types.
    pub fn slack(&self) -> Option<T> {
        let exact = self.exact_log_prob.finite()?;
        let lower = self.lower_log_bound.finite()?;
        let upper = self.upper_log_bound.finite()?;
        Some((exact - lower).min(upper - exact))
    }
}

fn sandwich_with<T: Scalar>(t: &EmpiricalType, q: &Distribution<T>, table: &LogFactorials<T>) -> BoundReport<T> {
    let exact = log_probability_with(t, q, table);
    let n = T::lit(t.n() as f64);
    let m = T::lit(t.alphabet().len() as f64);
    let d = kl_divergence(&t.distribution(), q).expect("alphabets checked by caller");
    let (lower, upper, holds) = match d {
        ExtendedReal::Finite(d) => {
            let upper = -n * d;
            let lower = upper - m * (n + T::one()).ln();
            let slack = T::tolerance(tol::NORMALIZATION);
            let holds = match exact {
                ExtendedReal::Finite(e) => lower - slack <= e && e <= upper + slack,
                _ => false,
            };
            (ExtendedReal::Finite(lower), ExtendedReal::Finite(upper), holds)
        }
        _ => (
            ExtendedReal::NegInfinity,
            ExtendedReal::NegInfinity,
            exact == ExtendedReal::NegInfinity,
        ),
    };
    BoundReport {
        counts: t.counts().to_vec(),
        n: t.n(),
        exact_log_prob: exact,
        lower_log_bound: lower,
        upper_log_bound: upper,
        holds,
    }
}

/// Checks one type against `exp(−n d)/(n+1)^m ≤ P ≤ exp(−n d)` in log space.
pub fn chernoff_sandwich<T: Scalar>(t: &EmpiricalType, q: &Distribution<T>) -> Result<BoundReport<T>> {
    t.alphabet().ensure_same(q.alphabet())?;
    Ok(sandwich_with(t, q, &LogFactorials::up_to(t.n())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

/// Exhaustive sandwich check over every type of `n` draws.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct ChernoffSummary<T> {
    pub n: u64,
    pub alphabet_size: usize,
    pub types_checked: usize,
    pub types_holding: usize,
    pub all_hold: bool,
    /// Smallest slack over the possible types (negative means a violation).
    pub min_slack: T,
    /// `Σ exp(log P(t; q))` over all types; one up to round-off.
    pub total_probability: T,
    pub mass_conserved: bool,
    #[serde(skip)]
    pub reports: Vec<BoundReport<T>>,
}

impl<T: Scalar> ChernoffSummary<T> {
    pub fn passed(&self) -> bool {
        self.all_hold && self.mass_conserved
    }
}

pub fn verify_chernoff<T: Scalar>(n: u64, q: &Distribution<T>, cap: u128) -> Result<ChernoffSummary<T>> {
    verify_chernoff_with(n, q, cap, Execution::Parallel)
}

/// Workers share only `q` and the factorial table; reports come back in
/// enumeration order and are reduced sequentially, so both execution modes
/// give bit-identical summaries.
pub fn verify_chernoff_with<T: Scalar>(
    n: u64,
    q: &Distribution<T>,
    cap: u128,
    execution: Execution,
) -> Result<ChernoffSummary<T>> {
    let types = enumerate_types(n, q.alphabet(), cap)?;
    let table = LogFactorials::up_to(n);
    let reports: Vec<BoundReport<T>> = match execution {
        Execution::Parallel => types.par_iter().map(|t| sandwich_with(t, q, &table)).collect(),
        Execution::Sequential => types.iter().map(|t| sandwich_with(t, q, &table)).collect(),
    };
    let types_holding = reports.iter().filter(|r| r.holds).count();
    let min_slack = reports
        .iter()
        .filter_map(BoundReport::slack)
        .fold(T::infinity(), T::min);
    let total_probability: T = reports
        .iter()
        .filter_map(|r| r.exact_log_prob.finite())
        .map(T::exp)
        .sum();
    Ok(ChernoffSummary {
        n,
        alphabet_size: q.len(),
        types_checked: reports.len(),
        types_holding,
        all_hold: types_holding == reports.len(),
        min_slack,
        total_probability,
        mass_conserved: (total_probability - T::one()).abs() <= T::tolerance(tol::NORMALIZATION),
        reports,
    })
}

/// Writes per-type reports as CSV: `type_counts,exact_log_prob,lower,upper,holds`.
/// Counts are space-separated inside the first field.
pub fn write_reports_csv<T: Scalar, W: Write>(reports: &[BoundReport<T>], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::Format(e.to_string());
    w.write_record(["type_counts", "exact_log_prob", "lower", "upper", "holds"])
        .map_err(io)?;
    for r in reports {
        let counts = r
            .counts
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        w.write_record([
            counts,
            r.exact_log_prob.to_string(),
            r.lower_log_bound.to_string(),
            r.upper_log_bound.to_string(),
            r.holds.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Format(e.to_string()))
}

/// The type of `n` draws closest to `p`: `n p` rounded by largest
/// remainders, ties going to the lowest index.
pub fn nearest_type<T: Scalar>(p: &Distribution<T>, n: u64) -> Result<EmpiricalType> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let scaled: Vec<f64> = p.probs().iter().map(|&v| v.as_f64() * n as f64).collect();
    let mut counts: Vec<u64> = scaled.iter().map(|v| v.floor() as u64).collect();
    let assigned: u64 = counts.iter().sum();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    // stable sort keeps lower indices first among equal remainders
    order.sort_by(|&a, &b| {
        let ra = scaled[a] - scaled[a].floor();
        let rb = scaled[b] - scaled[b].floor();
        rb.total_cmp(&ra)
    });
    let mut left = n.saturating_sub(assigned);
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        counts[i] += 1;
        left -= 1;
    }
    EmpiricalType::new(p.alphabet().clone(), counts)
}

/// One row of the surprise-rate table.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct RateRow<T> {
    pub n: u64,
    pub counts: Vec<u64>,
    /// `−(1/n) log P(t_n; q)`.
    pub rate: ExtendedReal<T>,
    /// `d(t_n/n, q)`, the exponent of the type actually used.
    pub type_divergence: ExtendedReal<T>,
    /// `d(p, q)`, the limit of the rate.
    pub divergence: ExtendedReal<T>,
    /// `|rate − d(t_n/n, q)|`.
    pub gap: T,
    /// `m log(n+1) / n`.
    pub gap_bound: T,
    pub within_bound: bool,
}

/// Per-draw surprise `−(1/n) log P` of the type nearest `p`, for each `n`.
///
/// Only one type per `n` is evaluated, so no enumeration cap applies.
pub fn surprise_rate_convergence<T: Scalar>(
    p: &Distribution<T>,
    q: &Distribution<T>,
    n_values: &[u64],
) -> Result<Vec<RateRow<T>>> {
    p.alphabet().ensure_same(q.alphabet())?;
    let divergence = kl_divergence(p, q)?;
    let m = T::lit(p.len() as f64);
    n_values
        .iter()
        .map(|&n| {
            let t = nearest_type(p, n)?;
            let report = chernoff_sandwich(&t, q)?;
            let nf = T::lit(n as f64);
            let rate = (-report.exact_log_prob).map(|v| v / nf);
            let type_divergence = kl_divergence(&t.distribution(), q)?;
            let gap_bound = m * (nf + T::one()).ln() / nf;
            let gap = match (rate, type_divergence) {
                (ExtendedReal::Finite(r), ExtendedReal::Finite(d)) => (r - d).abs(),
                (a, b) if a == b => T::zero(),
                _ => T::infinity(),
            };
            Ok(RateRow {
                n,
                counts: t.counts().to_vec(),
                rate,
                type_divergence,
                divergence,
                gap,
                gap_bound,
                within_bound: gap <= gap_bound + T::tolerance(tol::NORMALIZATION),
            })
        })
        .collect()
}

/// Observed frequency of one type in a Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeBin {
    pub counts: Vec<u64>,
    pub observed: u64,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeHistogram {
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    /// Sorted by counts, largest first count first.
    pub bins: Vec<TypeBin>,
}

impl TypeHistogram {
    pub fn frequency(&self, counts: &[u64]) -> f64 {
        self.bins
            .iter()
            .find(|b| b.counts == counts)
            .map_or(0.0, |b| b.frequency)
    }
}

/// Draws `trials` samples of `n` symbols from `q` and tallies their types.
pub fn sample_types<T: Scalar>(q: &Distribution<T>, n: u64, trials: u64, seed: u64) -> Result<TypeHistogram> {
    if trials == 0 || n == 0 {
        return Err(Error::InvalidArgument("n and trials must be at least 1".into()));
    }
    let sampler = Categorical::new(q);
    let mut rng = seeded_rng(seed);
    let mut tally: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    let mut counts = vec![0u64; q.len()];
    for _ in 0..trials {
        counts.iter_mut().for_each(|c| *c = 0);
        for _ in 0..n {
            counts[sampler.sample(&mut rng)] += 1;
        }
        *tally.entry(counts.clone()).or_default() += 1;
    }
    let bins = tally
        .into_iter()
        .rev()
        .map(|(counts, observed)| TypeBin {
            counts,
            observed,
            frequency: observed as f64 / trials as f64,
        })
        .collect();
    Ok(TypeHistogram {
        n,
        trials,
        seed,
        bins,
    })
}
