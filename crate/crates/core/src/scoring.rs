//! The Bayesian prediction game: loss functions, numeric properness and
//! locality predicates, and seeded game simulations.
//!
//! Losses are oriented so that smaller is better; the log loss is
//! `−log p(x)`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::ExtendedReal;
use crate::sampling::{random_distribution, random_sparse_distribution, seeded_rng, Categorical};
use crate::scalar::{tol, Scalar};
use crate::simplex::{Alphabet, Distribution, JointDistribution, NormalizationPolicy};
use crate::types_lab::compositions;

/// `f(p, x)`: the loss of predicting `p` when `x` occurs.
pub trait LossFunction<T: Scalar> {
    fn name(&self) -> String;

    fn evaluate(&self, prediction: &Distribution<T>, outcome: usize) -> ExtendedReal<T>;
}

/// `−log p(x)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LogLoss;

impl<T: Scalar> LossFunction<T> for LogLoss {
    fn name(&self) -> String {
        "log".into()
    }

    fn evaluate(&self, prediction: &Distribution<T>, outcome: usize) -> ExtendedReal<T> {
        let p = prediction.at(outcome);
        if p <= T::zero() {
            ExtendedReal::PosInfinity
        } else {
            ExtendedReal::Finite(-p.ln())
        }
    }
}

/// `A · (−log p(x)) + B` with `A > 0`.
#[derive(Debug, Clone, Copy)]
pub struct AffineLogLoss<T> {
    pub scale: T,
    pub offset: T,
}

impl<T: Scalar> LossFunction<T> for AffineLogLoss<T> {
    fn name(&self) -> String {
        format!("affine-log({}, {})", self.scale, self.offset)
    }

    fn evaluate(&self, prediction: &Distribution<T>, outcome: usize) -> ExtendedReal<T> {
        LogLoss
            .evaluate(prediction, outcome)
            .map(|v| self.scale * v + self.offset)
    }
}

/// The same loss whatever the prediction.
#[derive(Debug, Clone, Copy)]
pub struct ConstantLoss<T>(pub T);

impl<T: Scalar> LossFunction<T> for ConstantLoss<T> {
    fn name(&self) -> String {
        format!("constant({})", self.0)
    }

    fn evaluate(&self, _prediction: &Distribution<T>, _outcome: usize) -> ExtendedReal<T> {
        ExtendedReal::Finite(self.0)
    }
}

/// `Σ_y (1[y = x] − p(y))²`: proper but not local.
#[derive(Debug, Clone, Copy, Default)]
pub struct BrierScore;

impl<T: Scalar> LossFunction<T> for BrierScore {
    fn name(&self) -> String {
        "brier".into()
    }

    fn evaluate(&self, prediction: &Distribution<T>, outcome: usize) -> ExtendedReal<T> {
        let total = prediction
            .probs()
            .iter()
            .enumerate()
            .map(|(y, &p)| {
                let hit = if y == outcome { T::one() } else { T::zero() };
                (hit - p) * (hit - p)
            })
            .sum();
        ExtendedReal::Finite(total)
    }
}

/// `(1 − p(x))²`: local but not proper.
#[derive(Debug, Clone, Copy, Default)]
pub struct LocalBrier;

impl<T: Scalar> LossFunction<T> for LocalBrier {
    fn name(&self) -> String {
        "local-brier".into()
    }

    fn evaluate(&self, prediction: &Distribution<T>, outcome: usize) -> ExtendedReal<T> {
        let miss = T::one() - prediction.at(outcome);
        ExtendedReal::Finite(miss * miss)
    }
}

/// Log loss of predicting `p` when `x` occurs.
pub fn log_loss<T: Scalar>(p: &Distribution<T>, x: &str) -> Result<ExtendedReal<T>> {
    let i = p.alphabet().index_of(x)?;
    Ok(LossFunction::<T>::evaluate(&LogLoss, p, i))
}

/// `Σ_x truth(x) f(prediction, x)`; outcomes with `truth(x) = 0` contribute
/// nothing even when their loss is infinite.
pub fn expected_loss<T: Scalar>(
    f: &dyn LossFunction<T>,
    prediction: &Distribution<T>,
    truth: &Distribution<T>,
) -> Result<ExtendedReal<T>> {
    prediction.alphabet().ensure_same(truth.alphabet())?;
    let mut total = T::zero();
    for (x, &w) in truth.probs().iter().enumerate() {
        if w <= T::zero() {
            continue;
        }
        match f.evaluate(prediction, x) {
            ExtendedReal::Finite(v) => total = total + w * v,
            infinite => return Ok(infinite),
        }
    }
    Ok(ExtendedReal::Finite(total))
}

fn extended_diff<T: Scalar>(a: ExtendedReal<T>, b: ExtendedReal<T>) -> T {
    match (a, b) {
        (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => x - y,
        (x, y) if x == y => T::zero(),
        (x, y) if x > y => T::infinity(),
        _ => T::neg_infinity(),
    }
}

pub const MAX_GRID_ALPHABET: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct ProperReport<T> {
    /// Reporting the truth is no worse than any grid prediction.
    pub is_minimizer: bool,
    /// Smallest excess loss of a grid prediction other than the truth.
    /// Zero means some other prediction ties with the truth.
    pub margin: T,
    pub truth_loss: ExtendedReal<T>,
    pub grid_points: usize,
    /// Grid prediction with the smallest expected loss.
    pub best_prediction: Vec<T>,
}

/// Searches a barycentric grid of predictions with denominators
/// `resolution`, plus the truth itself, for anything beating the truth.
pub fn check_proper<T: Scalar>(
    f: &dyn LossFunction<T>,
    truth: &Distribution<T>,
    resolution: u64,
) -> Result<ProperReport<T>> {
    let m = truth.len();
    if m > MAX_GRID_ALPHABET {
        return Err(Error::AlphabetTooLarge {
            size: m,
            max: MAX_GRID_ALPHABET,
        });
    }
    if resolution < 10 {
        return Err(Error::InvalidArgument(
            "grid resolution must be at least 10".into(),
        ));
    }
    let truth_loss = expected_loss(f, truth, truth)?;
    let same = T::tolerance(tol::IDENTITY);
    let slack = T::tolerance(tol::REFORMULATION);
    let denom = T::lit(resolution as f64);

    let mut margin = T::infinity();
    let mut is_minimizer = true;
    let mut grid_points = 0;
    let mut best = (truth_loss, truth.probs().to_vec());
    let mut counts = vec![0u64; m];
    let mut failure = None;
    compositions(resolution, 0, &mut counts, &mut |c| {
        if failure.is_some() {
            return;
        }
        grid_points += 1;
        let probs: Vec<T> = c.iter().map(|&k| T::lit(k as f64) / denom).collect();
        let point = Distribution::from_parts_unchecked(truth.alphabet().clone(), probs);
        let loss = match expected_loss(f, &point, truth) {
            Ok(l) => l,
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        let excess = extended_diff(loss, truth_loss);
        if excess < -slack {
            is_minimizer = false;
        }
        if point.max_abs_diff(truth) > same {
            margin = margin.min(excess);
        }
        if loss < best.0 {
            best = (loss, point.probs().to_vec());
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(ProperReport {
        is_minimizer,
        margin,
        truth_loss,
        grid_points,
        best_prediction: best.1,
    })
}

/// Tests whether `f(p, x)` depends only on `p(x)`.
///
/// Each trial draws `(p, x)` and builds a different `(p′, x′)`, on a
/// possibly different alphabet, with `p′(x′) = p(x)` by construction; the
/// losses must agree within the reformulation tolerance in every trial.
pub fn check_local<T: Scalar>(f: &dyn LossFunction<T>, trials: usize, seed: u64) -> Result<bool> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mut rng = seeded_rng(seed);
    let agree = T::tolerance(tol::REFORMULATION);
    for trial in 0..trials {
        let m = rng.random_range(3..=6);
        let alphabet = Alphabet::indexed(m)?;
        let p: Distribution<T> = if trial % 5 == 0 {
            random_sparse_distribution(&alphabet, 0.5, &mut rng)
        } else {
            random_distribution(&alphabet, &mut rng)
        };
        let x = rng.random_range(0..m);
        let weight = p.at(x);

        let m2 = rng.random_range(3..=6);
        let alphabet2 = Alphabet::indexed(m2)?;
        let x2 = rng.random_range(0..m2);
        let rest: Distribution<T> = random_distribution(&Alphabet::indexed(m2 - 1)?, &mut rng);
        let mut probs = Vec::with_capacity(m2);
        let mut others = rest.probs().iter();
        for i in 0..m2 {
            if i == x2 {
                probs.push(weight);
            } else {
                probs.push(*others.next().expect("m2 − 1 entries") * (T::one() - weight));
            }
        }
        let p2 = Distribution::new(alphabet2, probs, NormalizationPolicy::Strict)?;

        let a = f.evaluate(&p, x);
        let b = f.evaluate(&p2, x2);
        let same = match (a, b) {
            (ExtendedReal::Finite(u), ExtendedReal::Finite(v)) => (u - v).abs() <= agree,
            (u, v) => u == v,
        };
        if !same {
            return Ok(false);
        }
    }
    Ok(true)
}

/// How the player forms a prediction each round.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy<T> {
    /// The deck itself, or `p_{X|Y=y}` when side information is revealed.
    Optimal,
    /// The uniform distribution.
    Uniform,
    /// The marginal `p_X`, ignoring any side information.
    IgnoreSideInfo,
    /// A fixed belief.
    Stubborn(Distribution<T>),
}

impl<T: Scalar> Strategy<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Optimal => "optimal",
            Self::Uniform => "uniform",
            Self::IgnoreSideInfo => "marginal",
            Self::Stubborn(_) => "stubborn",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct PredictionEntry<T> {
    pub side_info: Option<String>,
    pub probs: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct RoundRecord<T> {
    pub outcome: String,
    pub side_info: Option<String>,
    /// Index into [`GameRecord::predictions`].
    pub prediction: usize,
    pub loss: ExtendedReal<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct GameRecord<T> {
    pub strategy: String,
    pub rounds: usize,
    pub seed: u64,
    /// `+inf` as soon as one round scores an infinite loss.
    pub average_loss: ExtendedReal<T>,
    pub infinite_rounds: usize,
    pub sample_std: ExtendedReal<T>,
    pub standard_error: ExtendedReal<T>,
    pub predictions: Vec<PredictionEntry<T>>,
    pub per_round: Vec<RoundRecord<T>>,
}

/// Neumaier summation.
fn compensated_sum<T: Scalar>(values: &[T]) -> T {
    let mut sum = T::zero();
    let mut carry = T::zero();
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry = carry + ((sum - t) + v);
        } else {
            carry = carry + ((v - t) + sum);
        }
        sum = t;
    }
    sum + carry
}

fn summarize<T: Scalar>(
    strategy: &Strategy<T>,
    seed: u64,
    predictions: Vec<PredictionEntry<T>>,
    per_round: Vec<RoundRecord<T>>,
) -> GameRecord<T> {
    let rounds = per_round.len();
    let infinite_rounds = per_round.iter().filter(|r| !r.loss.is_finite()).count();
    let (average_loss, sample_std, standard_error) = if infinite_rounds > 0 {
        (
            ExtendedReal::PosInfinity,
            ExtendedReal::PosInfinity,
            ExtendedReal::PosInfinity,
        )
    } else {
        let n = T::lit(rounds as f64);
        let values: Vec<T> = per_round.iter().filter_map(|r| r.loss.finite()).collect();
        let mean = compensated_sum(&values) / n;
        let var = if rounds > 1 {
            values.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / (n - T::one())
        } else {
            T::zero()
        };
        let std = var.sqrt();
        (
            ExtendedReal::Finite(mean),
            ExtendedReal::Finite(std),
            ExtendedReal::Finite(std / n.sqrt()),
        )
    };
    GameRecord {
        strategy: strategy.name().to_string(),
        rounds,
        seed,
        average_loss,
        infinite_rounds,
        sample_std,
        standard_error,
        predictions,
        per_round,
    }
}

fn fixed_prediction<T: Scalar>(
    strategy: &Strategy<T>,
    alphabet: &Alphabet,
    marginal: &Distribution<T>,
) -> Result<Option<Distribution<T>>> {
    Ok(match strategy {
        Strategy::Optimal => None,
        Strategy::Uniform => Some(Distribution::uniform(alphabet.clone())),
        Strategy::IgnoreSideInfo => Some(marginal.clone()),
        Strategy::Stubborn(belief) => {
            belief.alphabet().ensure_same(alphabet)?;
            Some(belief.clone())
        }
    })
}

/// Plays `rounds` rounds against `deck`, scoring each with the log loss.
pub fn play_game<T: Scalar>(
    deck: &Distribution<T>,
    strategy: &Strategy<T>,
    rounds: usize,
    seed: u64,
) -> Result<GameRecord<T>> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be at least 1".into()));
    }
    let prediction = fixed_prediction(strategy, deck.alphabet(), deck)?.unwrap_or_else(|| deck.clone());
    let sampler = Categorical::new(deck);
    let mut rng = seeded_rng(seed);
    let per_round = (0..rounds)
        .map(|_| {
            let x = sampler.sample(&mut rng);
            RoundRecord {
                outcome: deck.alphabet().label(x).to_string(),
                side_info: None,
                prediction: 0,
                loss: LossFunction::<T>::evaluate(&LogLoss, &prediction, x),
            }
        })
        .collect();
    let predictions = vec![PredictionEntry {
        side_info: None,
        probs: prediction.probs().to_vec(),
    }];
    Ok(summarize(strategy, seed, predictions, per_round))
}

/// Each round draws `(x, y)` from `joint`, reveals `y`, and scores the
/// prediction for `x` with the log loss.
pub fn play_game_with_side_info<T: Scalar>(
    joint: &JointDistribution<T>,
    strategy: &Strategy<T>,
    rounds: usize,
    seed: u64,
) -> Result<GameRecord<T>> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be at least 1".into()));
    }
    let px = joint.marginal_x();
    let py = joint.marginal_y();
    let fixed = fixed_prediction(strategy, joint.x_alphabet(), &px)?;
    let k = joint.cols();
    let mut predictions = Vec::new();
    let mut table: Vec<Option<(usize, Distribution<T>)>> = vec![None; k];
    for (y, slot) in table.iter_mut().enumerate() {
        if py.at(y) <= T::zero() {
            continue;
        }
        let belief = match &fixed {
            Some(d) => d.clone(),
            None => joint.conditional_slice_at(y)?,
        };
        predictions.push(PredictionEntry {
            side_info: Some(joint.y_alphabet().label(y).to_string()),
            probs: belief.probs().to_vec(),
        });
        *slot = Some((predictions.len() - 1, belief));
    }

    let sampler = Categorical::from_weights(joint.probs());
    let mut rng = seeded_rng(seed);
    let per_round = (0..rounds)
        .map(|_| {
            let cell = sampler.sample(&mut rng);
            let (x, y) = (cell / k, cell % k);
            let (index, belief) = table[y].as_ref().expect("drawn y has positive mass");
            RoundRecord {
                outcome: joint.x_alphabet().label(x).to_string(),
                side_info: Some(joint.y_alphabet().label(y).to_string()),
                prediction: *index,
                loss: LossFunction::<T>::evaluate(&LogLoss, belief, x),
            }
        })
        .collect();
    Ok(summarize(strategy, seed, predictions, per_round))
}
