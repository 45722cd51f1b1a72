//! Random variables over sample batches and their empirical estimates.
//!
//! Two variables are evaluated per vector:
//! - the AGM ratio L(a): arithmetic mean of the entries divided by their
//!   geometric mean, always >= 1 with equality at equal entries,
//! - the scaled Frobenius number X(a): F(a) / (prod a_i)^(1/(n-1)).
//!   Vectors with an entry 1 have F = -1 and keep their negative value;
//!   the probability space is the whole box and negative values never
//!   affect a tail at a positive threshold.
//!
//! Estimates (moments, tails) are computed over a [`VariableSeries`],
//! the per-vector values of one batch in draw order. Evaluation may be
//! partitioned across workers; reductions run serially in draw order
//! with compensated summation, so results are identical for any worker
//! count.
//!
//! The empirical-inequality checks (Markov, the split-tail union bound)
//! hold for the empirical measure by construction and are asserted with
//! no tolerance beyond [`EMPIRICAL_SUM_TOL`] for accumulated sums.

use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::frobenius;
use crate::parallel;
use crate::sampler::SampleBatch;
use crate::vector::PrimitiveVector;

/// Tolerance for floating-point accumulation in exact empirical checks.
pub const EMPIRICAL_SUM_TOL: f64 = 1e-12;

/// Exceedance count below which a grid point is excluded from the
/// power-law fit.
pub const DEFAULT_MIN_FIT_EXCEEDANCES: usize = 50;

/// Slack constant in the expectation floor check.
pub const DEFAULT_EXPECTATION_SLACK: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Variable {
    /// Arithmetic-to-geometric mean ratio of the entries.
    #[serde(rename = "L")]
    AgmRatio,
    /// Frobenius number scaled by (prod a_i)^(1/(n-1)).
    #[serde(rename = "X")]
    FrobeniusRatio,
}

impl std::fmt::Display for Variable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variable::AgmRatio => "L",
            Variable::FrobeniusRatio => "X",
        })
    }
}

/// One evaluated variable on one vector.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VariableValue {
    pub variable: Variable,
    pub value: f64,
}

/// Arithmetic mean over geometric mean; the geometric mean goes through
/// exp(mean(log)).
pub fn agm_ratio(a: &PrimitiveVector) -> f64 {
    let n = a.dim() as f64;
    let mean = a.entry_sum() as f64 / n;
    let geometric = (a.ln_product() / n).exp();
    mean / geometric
}

/// Exact Frobenius number over (prod a_i)^(1/(n-1)). Negative exactly
/// when some entry is 1.
pub fn frobenius_ratio(a: &PrimitiveVector) -> Result<f64> {
    let f = frobenius::frobenius(a)?.value as f64;
    let scale = (a.ln_product() / (a.dim() as f64 - 1.0)).exp();
    Ok(f / scale)
}

pub fn eval_variable(a: &PrimitiveVector, variable: Variable) -> Result<VariableValue> {
    let value = match variable {
        Variable::AgmRatio => agm_ratio(a),
        Variable::FrobeniusRatio => frobenius_ratio(a)?,
    };
    Ok(VariableValue { variable, value })
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

fn compensated_mean(values: impl Iterator<Item = f64>, len: usize) -> f64 {
    let mut acc = CompensatedSum::default();
    for v in values {
        acc.add(v);
    }
    acc.value() / len as f64
}

/// Per-vector values of one variable over one batch, in draw order.
#[derive(Debug, Clone)]
pub struct VariableSeries {
    pub variable: Variable,
    pub values: Vec<f64>,
    pub t: u64,
    pub n: u32,
    pub batch_id: u64,
}

/// Evaluates `variable` on every vector of the batch, in draw order.
pub fn eval_series(
    batch: &SampleBatch,
    variable: Variable,
    workers: usize,
) -> Result<VariableSeries> {
    if batch.vectors.is_empty() {
        return Err(Error::Usage("batch is empty".into()));
    }
    let values: Vec<f64> = parallel::par_map(&batch.vectors, workers, |v| {
        eval_variable(v, variable).map(|vv| vv.value)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok(VariableSeries {
        variable,
        values,
        t: batch.spec.t,
        n: batch.spec.n,
        batch_id: batch.batch_id(),
    })
}

/// Empirical k-th moment of a variable over a batch.
#[derive(Debug, Clone, Serialize)]
pub struct MomentEstimate {
    pub variable: Variable,
    pub k: f64,
    pub value: f64,
    pub sample_size: usize,
    pub t: u64,
    pub n: u32,
    /// Set when the moment order lies outside the proved regime
    /// (k >= n for the AGM ratio). The estimate is still reported.
    pub outside_proved_regime: bool,
    #[serde(skip)]
    pub batch_id: u64,
}

/// Mean of value^k across the series. Real k is accepted; for signed
/// values k must be an integer.
pub fn estimate_moment(series: &VariableSeries, k: f64) -> Result<MomentEstimate> {
    if k <= 0.0 || !k.is_finite() {
        return Err(Error::Usage(format!("moment order must be positive, got {k}")));
    }
    let integer_k = k.fract() == 0.0 && k.abs() <= i32::MAX as f64;
    if !integer_k && series.values.iter().any(|&v| v < 0.0) {
        return Err(Error::Usage(
            "non-integer moment of a signed variable is undefined".into(),
        ));
    }
    let powered = series.values.iter().map(|&v| {
        if integer_k {
            v.powi(k as i32)
        } else {
            v.powf(k)
        }
    });
    let value = compensated_mean(powered, series.values.len());
    Ok(MomentEstimate {
        variable: series.variable,
        k,
        value,
        sample_size: series.values.len(),
        t: series.t,
        n: series.n,
        outside_proved_regime: series.variable == Variable::AgmRatio && k >= series.n as f64,
        batch_id: series.batch_id,
    })
}

/// Empirical survival function over a threshold grid, with a power-law
/// exponent fitted on the well-populated part of the grid.
#[derive(Debug, Clone, Serialize)]
pub struct TailEstimate {
    pub variable: Variable,
    pub thresholds: Vec<f64>,
    /// Prob(V >= threshold), non-increasing along the grid.
    pub survival: Vec<f64>,
    /// Least-squares slope of log survival against log threshold over
    /// the grid points with enough exceedances; absent when fewer than
    /// two points qualify.
    pub fitted_exponent: Option<f64>,
    pub sample_size: usize,
    pub t: u64,
    pub n: u32,
    #[serde(skip)]
    pub batch_id: u64,
}

/// Default threshold grid, shared by both variables.
pub fn default_thresholds(_variable: Variable) -> Vec<f64> {
    vec![1.25, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0]
}

pub fn estimate_tail(series: &VariableSeries, thresholds: &[f64]) -> Result<TailEstimate> {
    estimate_tail_with(series, thresholds, DEFAULT_MIN_FIT_EXCEEDANCES)
}

pub fn estimate_tail_with(
    series: &VariableSeries,
    thresholds: &[f64],
    min_fit_exceedances: usize,
) -> Result<TailEstimate> {
    if thresholds.is_empty() {
        return Err(Error::Usage("threshold grid is empty".into()));
    }
    if thresholds.iter().any(|&t| t <= 0.0 || !t.is_finite()) {
        return Err(Error::Usage("thresholds must be positive and finite".into()));
    }
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Usage("thresholds must be strictly increasing".into()));
    }

    let size = series.values.len();
    let exceedances: Vec<usize> = thresholds
        .iter()
        .map(|&thr| series.values.iter().filter(|&&v| v >= thr).count())
        .collect();
    let survival: Vec<f64> = exceedances.iter().map(|&c| c as f64 / size as f64).collect();

    let points: Vec<(f64, f64)> = thresholds
        .iter()
        .zip(&exceedances)
        .filter(|&(_, &c)| c >= min_fit_exceedances.max(1))
        .map(|(&thr, &c)| (thr.ln(), (c as f64 / size as f64).ln()))
        .collect();
    let fitted_exponent = least_squares_slope(&points);

    Ok(TailEstimate {
        variable: series.variable,
        thresholds: thresholds.to_vec(),
        survival,
        fitted_exponent,
        sample_size: size,
        t: series.t,
        n: series.n,
        batch_id: series.batch_id,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let len = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / len;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / len;
    let mut cov = 0.0;
    let mut var = 0.0;
    for &(x, y) in points {
        cov += (x - mean_x) * (y - mean_y);
        var += (x - mean_x) * (x - mean_x);
    }
    (var > 0.0).then(|| cov / var)
}

#[derive(Debug, Clone, Serialize)]
pub struct MarkovRow {
    pub threshold: f64,
    pub survival: f64,
    /// moment / threshold^k
    pub bound: f64,
    pub pass: bool,
}

/// Markov's inequality on the empirical measure: for every grid point,
/// survival(alpha) <= E(V^k) / alpha^k.
#[derive(Debug, Clone, Serialize)]
pub struct MarkovReport {
    pub variable: Variable,
    pub k: f64,
    pub moment_value: f64,
    pub sample_size: usize,
    pub rows: Vec<MarkovRow>,
    pub pass: bool,
}

pub fn markov_check(moment: &MomentEstimate, tail: &TailEstimate) -> Result<MarkovReport> {
    if moment.batch_id != tail.batch_id {
        return Err(Error::Usage(
            "moment and tail were computed on different batches".into(),
        ));
    }
    if moment.variable != tail.variable {
        return Err(Error::Usage(
            "moment and tail were computed on different variables".into(),
        ));
    }
    let rows: Vec<MarkovRow> = tail
        .thresholds
        .iter()
        .zip(&tail.survival)
        .map(|(&threshold, &survival)| {
            let bound = moment.value / threshold.powf(moment.k);
            let pass = survival <= bound + EMPIRICAL_SUM_TOL * bound.abs().max(1.0);
            MarkovRow {
                threshold,
                survival,
                bound,
                pass,
            }
        })
        .collect();
    let pass = rows.iter().all(|r| r.pass);
    Ok(MarkovReport {
        variable: moment.variable,
        k: moment.k,
        moment_value: moment.value,
        sample_size: tail.sample_size,
        rows,
        pass,
    })
}

/// Empirical mean of the scaled Frobenius number against its floor
/// ((n-1)!)^(1/(n-1)) * (1 - slack * T^(-1/(n-1))).
#[derive(Debug, Clone, Serialize)]
pub struct ExpectationReport {
    pub t: u64,
    pub n: u32,
    pub sample_size: usize,
    pub mean: f64,
    /// ((n-1)!)^(1/(n-1))
    pub reference: f64,
    pub ratio: f64,
    /// Artifact knob, not a derived constant.
    pub slack_constant: f64,
    pub floor: f64,
    pub pass: bool,
}

pub fn expectation_floor_check(
    series: &VariableSeries,
    slack_constant: f64,
) -> Result<ExpectationReport> {
    if series.variable != Variable::FrobeniusRatio {
        return Err(Error::Usage(
            "expectation floor applies to the scaled Frobenius number".into(),
        ));
    }
    if series.n < 3 {
        return Err(Error::Usage(
            "expectation floor check requires n >= 3".into(),
        ));
    }
    let mean = compensated_mean(series.values.iter().copied(), series.values.len());
    let reference = bounds::factorial_root(series.n);
    let exponent = -1.0 / (series.n as f64 - 1.0);
    let floor = reference * (1.0 - slack_constant * (series.t as f64).powf(exponent));
    Ok(ExpectationReport {
        t: series.t,
        n: series.n,
        sample_size: series.values.len(),
        mean,
        reference,
        ratio: mean / reference,
        slack_constant,
        floor,
        pass: mean >= floor,
    })
}

/// (n - 1) / (n + 1), the exponent splitting the product tail event.
pub fn default_split_exponent(n: u32) -> f64 {
    (n as f64 - 1.0) / (n as f64 + 1.0)
}

/// Union bound decomposition of the scaled-Frobenius tail.
///
/// The event {X >= beta} with X = U * V is contained in
/// {U >= beta^t} union {V >= beta^(1-t)}, where
/// U = F(a) / |a|_1^(1 + 1/(n-1)) and
/// V = |a|_1^(1 + 1/(n-1)) / (prod a_i)^(1/(n-1)),
/// so the empirical probabilities satisfy lhs <= rhs1 + rhs2.
#[derive(Debug, Clone, Serialize)]
pub struct SplitReport {
    pub beta: f64,
    pub t_exponent: f64,
    pub t: u64,
    pub n: u32,
    pub sample_size: usize,
    /// Prob(X >= beta)
    pub prob_scaled_frobenius: f64,
    /// Prob(U >= beta^t)
    pub prob_frobenius_over_norm: f64,
    /// Prob(V >= beta^(1-t))
    pub prob_norm_over_product: f64,
    pub rhs_sum: f64,
    pub pass: bool,
}

pub fn split_tail_check(
    batch: &SampleBatch,
    beta: f64,
    t_exponent: f64,
    workers: usize,
) -> Result<SplitReport> {
    if batch.spec.n < 3 {
        return Err(Error::Usage("split decomposition requires n >= 3".into()));
    }
    if beta <= 1.0 || !beta.is_finite() {
        return Err(Error::Usage(format!("beta must exceed 1, got {beta}")));
    }
    if t_exponent.is_nan() || t_exponent <= 0.0 || t_exponent >= 1.0 {
        return Err(Error::Usage(format!(
            "split exponent must lie in (0, 1), got {t_exponent}"
        )));
    }
    if batch.vectors.is_empty() {
        return Err(Error::Usage("batch is empty".into()));
    }

    let first = beta.powf(t_exponent);
    let second = beta.powf(1.0 - t_exponent);
    let events: Vec<(bool, bool, bool)> = parallel::par_map(&batch.vectors, workers, |a| {
        let n = a.dim() as f64;
        let f = frobenius::frobenius(a)?.value as f64;
        let ln_norm_power = (1.0 + 1.0 / (n - 1.0)) * (a.entry_sum() as f64).ln();
        let ln_scale = a.ln_product() / (n - 1.0);
        let x = f / ln_scale.exp();
        let u = f / ln_norm_power.exp();
        let v = (ln_norm_power - ln_scale).exp();
        Ok((x >= beta, u >= first, v >= second))
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let size = events.len();
    let count = |sel: fn(&(bool, bool, bool)) -> bool| {
        events.iter().filter(|e| sel(e)).count() as f64 / size as f64
    };
    let prob_scaled_frobenius = count(|e| e.0);
    let prob_frobenius_over_norm = count(|e| e.1);
    let prob_norm_over_product = count(|e| e.2);
    let rhs_sum = prob_frobenius_over_norm + prob_norm_over_product;
    Ok(SplitReport {
        beta,
        t_exponent,
        t: batch.spec.t,
        n: batch.spec.n,
        sample_size: size,
        prob_scaled_frobenius,
        prob_frobenius_over_norm,
        prob_norm_over_product,
        rhs_sum,
        pass: prob_scaled_frobenius <= rhs_sum + EMPIRICAL_SUM_TOL,
    })
}
