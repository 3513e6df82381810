//! Counting functions and threshold sequences.
//!
//! For a discrete set `D` with exhaustion `rho >= 1`:
//!
//! * `n(t, D) = #{x in D : rho(x) <= t}` is the unintegrated counting
//!   function;
//! * `N(r, D) = integral_1^r n(t, D) dt/t`, which for `rho >= 1` collapses to
//!   the finite sum `sum_p log+ (r / rho(p))`.
//!
//! A threshold sequence is a strictly increasing list `R_k >= 1`; a set is
//! "tame-certified" along it when `n(R_k, D) <= k` for all `k`. The two
//! constructive directions implemented here:
//!
//! * growth function -> thresholds: from an increasing `h` with
//!   `h(r)/log r -> infinity`, radii `R_k` with
//!   `sum_k log+(r/R_k) < h(r)` on the sample range;
//! * thresholds -> growth function: a piecewise log-linear `h` with anchors
//!   `h(p_k) = c_k (k+1)` at `p_k = e^{c_k} R_k`, designed so that any set
//!   violating the threshold condition at step `k` satisfies
//!   `N(p_k, D) >= h(p_k)`.

use crate::error::{Error, Result};
use crate::space::DiscreteSet;
use serde::Serialize;

/// Multiplicative safety margin applied to constructed radii.
pub const RADIUS_MARGIN: f64 = 1e-6;

/// Sample density for growth-function scans.
pub const SAMPLES_PER_DECADE: usize = 64;

/// Relative tolerance for the sum-vs-integral cross check.
pub const CROSS_CHECK_TOL: f64 = 1e-6;

/// Geometric sample grid on `(1, r_max]`: points `10^(i/per_decade)` for
/// `i = 1, 2, ...` capped at and including `r_max`. The grid deliberately
/// starts above 1: at `r = 1` both sides of every strict growth inequality
/// vanish, so the endpoint carries no information.
pub fn log_grid(r_max: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(r_max > 1.0) || !r_max.is_finite() {
        return Err(Error::Precondition(format!(
            "sample range needs r_max > 1, got {r_max}"
        )));
    }
    let steps = (per_decade as f64 * r_max.log10()).ceil() as usize;
    let mut grid: Vec<f64> = (1..=steps)
        .map(|i| 10f64.powf(i as f64 / per_decade as f64))
        .take_while(|r| *r < r_max)
        .collect();
    grid.push(r_max);
    Ok(grid)
}

fn sorted_rhos(set: &DiscreteSet) -> Result<Vec<f64>> {
    let mut rhos = set.rho_values()?;
    rhos.sort_by(f64::total_cmp);
    Ok(rhos)
}

/// `n(t, D)`: number of points with `rho <= t`.
pub fn counting_n(set: &DiscreteSet, t: f64) -> Result<usize> {
    Ok(set.rho_values()?.into_iter().filter(|r| *r <= t).count())
}

/// `N(r, D) = sum_p log+(r / rho(p))`, accumulated left to right over sorted
/// exhaustion values for a deterministic reduction order.
pub fn counting_big_n(set: &DiscreteSet, r: f64) -> Result<f64> {
    Ok(counting_big_n_from(&sorted_rhos(set)?, r.ln()))
}

fn counting_big_n_from(sorted: &[f64], log_r: f64) -> f64 {
    sorted
        .iter()
        .map(|rho| (log_r - rho.ln()).max(0.0))
        .sum()
}

/// `N(r, D)` computed through the step structure of `n(t, D)`: the integral
/// `int_1^r n(t) dt/t` as a finite sum of `count * log-length` segment terms.
/// Algebraically identical to [`counting_big_n`], numerically independent.
pub fn counting_big_n_integral(set: &DiscreteSet, r: f64) -> Result<f64> {
    let sorted = sorted_rhos(set)?;
    let log_r = r.ln();
    let inside: Vec<f64> = sorted.into_iter().filter(|x| x.ln() <= log_r).collect();
    let mut total = 0.0;
    for (i, rho) in inside.iter().enumerate() {
        let seg_end = if i + 1 < inside.len() {
            inside[i + 1].ln()
        } else {
            log_r
        };
        total += (i + 1) as f64 * (seg_end - rho.ln());
    }
    Ok(total)
}

/// `N(r, D)` with the sum/integral identity enforced: returns the sum form,
/// erroring if the two computation routes disagree beyond `1e-6` relative.
pub fn counting_big_n_checked(set: &DiscreteSet, r: f64) -> Result<f64> {
    let a = counting_big_n(set, r)?;
    let b = counting_big_n_integral(set, r)?;
    if (a - b).abs() <= CROSS_CHECK_TOL * (1.0 + a.abs().max(b.abs())) {
        Ok(a)
    } else {
        Err(Error::InternalCheck(format!(
            "counting identity failed at r = {r}: sum {a} vs integral {b}"
        )))
    }
}

/// Sampled counting profile `(r, n(r), N(r))`, nondecreasing in both values.
#[derive(Clone, Debug, Serialize)]
pub struct CountingProfile {
    pub rows: Vec<ProfileRow>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProfileRow {
    pub r: f64,
    pub n: usize,
    pub big_n: f64,
}

impl CountingProfile {
    pub fn compute(set: &DiscreteSet, radii: &[f64]) -> Result<CountingProfile> {
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(
                "profile radii must be strictly increasing".into(),
            ));
        }
        let sorted = sorted_rhos(set)?;
        let rows = radii
            .iter()
            .map(|&r| ProfileRow {
                r,
                n: sorted.iter().filter(|x| **x <= r).count(),
                big_n: counting_big_n_from(&sorted, r.ln()),
            })
            .collect();
        let profile = CountingProfile { rows };
        profile.validate()?;
        Ok(profile)
    }

    /// Monotonicity of both counting functions along the radii.
    pub fn validate(&self) -> Result<()> {
        for w in self.rows.windows(2) {
            if w[1].n < w[0].n || w[1].big_n < w[0].big_n - 1e-12 {
                return Err(Error::InternalCheck(
                    "counting profile is not monotone".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Strictly increasing radii `R_k >= 1` (1-based in the math, 0-based here).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdSequence {
    values: Vec<f64>,
}

impl ThresholdSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v < 1.0) {
            return Err(Error::Precondition(
                "threshold values must be finite and >= 1".into(),
            ));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(
                "threshold values must be strictly increasing".into(),
            ));
        }
        Ok(ThresholdSequence { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The elementary rescaling `R_k -> 2 R_k + 1`, which preserves all
    /// threshold-sequence invariants.
    pub fn transform_2r_plus_1(&self) -> ThresholdSequence {
        ThresholdSequence {
            values: self.values.iter().map(|r| 2.0 * r + 1.0).collect(),
        }
    }
}

/// First `k` (1-based) with `n(R_k, D) > k`, or `None` if the threshold
/// condition holds along the whole sequence.
pub fn check_threshold_condition(
    set: &DiscreteSet,
    thresholds: &ThresholdSequence,
) -> Result<Option<usize>> {
    let sorted = sorted_rhos(set)?;
    for (i, &r_k) in thresholds.values().iter().enumerate() {
        let count = sorted.iter().filter(|x| **x <= r_k).count();
        if count > i + 1 {
            return Ok(Some(i + 1));
        }
    }
    Ok(None)
}

/// Outcome of the empirical "does h outgrow log" scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum GrowthCheck {
    /// `h(r)/log r` increased from mid-range to the end of the scan.
    Satisfied,
    /// The superlogarithmic-growth surrogate failed; the returned radii are
    /// still valid on the sampled range, but the asymptotic hypothesis is
    /// not supported by the samples.
    Flagged { ratio_mid: f64, ratio_end: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRadius {
    /// Radius `R` with `log+(r/R) < h(r)` for every sampled `r`.
    pub radius: f64,
    /// The attained supremum `B = max(log r - h(r))` over samples.
    pub sup_gap: f64,
    pub growth: GrowthCheck,
}

fn growth_samples(h: &dyn Fn(f64) -> f64, r_max: f64) -> Result<Vec<(f64, f64)>> {
    let grid = log_grid(r_max, SAMPLES_PER_DECADE)?;
    let samples: Vec<(f64, f64)> = grid.iter().map(|&r| (r, h(r))).collect();
    for w in samples.windows(2) {
        if w[1].1 < w[0].1 - 1e-12 * (1.0 + w[0].1.abs()) {
            return Err(Error::Precondition(format!(
                "growth function must be nondecreasing; h({}) = {} > h({}) = {}",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
    }
    if let Some((r, v)) = samples.iter().find(|(_, v)| *v <= 0.0) {
        return Err(Error::Precondition(format!(
            "growth function must be positive on (1, r_max]; h({r}) = {v}"
        )));
    }
    Ok(samples)
}

fn growth_check(samples: &[(f64, f64)]) -> GrowthCheck {
    // empirical surrogate for h(r)/log r -> infinity: the ratio at the end of
    // the range must exceed the ratio at the geometric midpoint
    let ratio = |&(r, v): &(f64, f64)| v / r.ln();
    let mid = &samples[samples.len() / 2];
    let end = samples.last().unwrap();
    let (ratio_mid, ratio_end) = (ratio(mid), ratio(end));
    if ratio_end > ratio_mid {
        GrowthCheck::Satisfied
    } else {
        GrowthCheck::Flagged {
            ratio_mid,
            ratio_end,
        }
    }
}

/// From an increasing positive `h` on `(1, r_max]`, a radius `R > 1` with
/// `log+(r/R) < h(r)` at every sample. `R = e^B (1 + margin)` where
/// `B = sup(log r - h(r))`, floored at the exhaustion floor 1 (raising `R`
/// only strengthens the inequality).
pub fn radius_for_growth(h: &dyn Fn(f64) -> f64, r_max: f64) -> Result<GrowthRadius> {
    let samples = growth_samples(h, r_max)?;
    let growth = growth_check(&samples);
    let sup_gap = samples
        .iter()
        .map(|&(r, v)| r.ln() - v)
        .fold(f64::NEG_INFINITY, f64::max);
    let radius = (sup_gap.exp() * (1.0 + RADIUS_MARGIN)).max(1.0 + RADIUS_MARGIN);
    for &(r, v) in &samples {
        if (r.ln() - radius.ln()).max(0.0) >= v {
            return Err(Error::InternalCheck(format!(
                "constructed radius {radius} fails at sample r = {r}"
            )));
        }
    }
    Ok(GrowthRadius {
        radius,
        sup_gap,
        growth,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthSequence {
    pub thresholds: ThresholdSequence,
    pub growth: GrowthCheck,
}

/// Threshold radii from a growth function: apply [`radius_for_growth`] to
/// `h_k = 2^-k h`, then enforce strict increase. By the geometric splitting,
/// `sum_{k<=K} log+(r/R_k) < (1 - 2^-K) h(r) < h(r)` at every sample.
pub fn sequence_for_growth(
    h: &dyn Fn(f64) -> f64,
    k_max: usize,
    r_max: f64,
) -> Result<GrowthSequence> {
    let samples = growth_samples(h, r_max)?;
    let growth = growth_check(&samples);
    let mut values = Vec::with_capacity(k_max);
    let mut prev: Option<f64> = None;
    for k in 1..=k_max {
        let scale = (2f64).powi(-(k as i32));
        let sup_gap = samples
            .iter()
            .map(|&(r, v)| r.ln() - scale * v)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut r_k = (sup_gap.exp() * (1.0 + RADIUS_MARGIN)).max(1.0 + RADIUS_MARGIN);
        if let Some(p) = prev {
            if r_k <= p {
                r_k = p * (1.0 + RADIUS_MARGIN);
            }
        }
        prev = Some(r_k);
        values.push(r_k);
    }
    Ok(GrowthSequence {
        thresholds: ThresholdSequence::new(values)?,
        growth,
    })
}

/// First sampled `r` where `sum_k log+(r/R_k) < h(r)` fails, if any.
pub fn first_sum_bound_violation(
    thresholds: &ThresholdSequence,
    h: &dyn Fn(f64) -> f64,
    grid: &[f64],
) -> Option<(f64, f64, f64)> {
    for &r in grid {
        let log_r = r.ln();
        let sum: f64 = thresholds
            .values()
            .iter()
            .map(|rk| (log_r - rk.ln()).max(0.0))
            .sum();
        if sum >= h(r) {
            return Some((r, sum, h(r)));
        }
    }
    None
}

/// Piecewise log-linear growth function `h(t) = a_k + b_k log t` between
/// breakpoints `p_k`, anchored at `h(p_k) = c_k (k+1)`. Breakpoints are kept
/// in log form so that extreme anchor products never overflow.
#[derive(Clone, Debug, Serialize)]
pub struct PiecewiseLogGrowth {
    /// `log p_k = c_k + log R_k`, strictly increasing.
    pub log_breakpoints: Vec<f64>,
    /// The anchor constants `c_k`.
    pub anchors_c: Vec<f64>,
    /// Anchor values `h(p_k) = c_k (k+1)`.
    pub anchor_values: Vec<f64>,
    /// Per-segment `(a_k, b_k)` for `[p_k, p_{k+1}]`; `b_k > 0`.
    pub segments: Vec<(f64, f64)>,
}

impl PiecewiseLogGrowth {
    /// Evaluate at `log t`. Exactly the anchor value at each breakpoint;
    /// below `p_1` the ray `h(p_1) log t / log p_1` (clamped at 0); above
    /// `p_K` the last segment extended.
    pub fn eval_log(&self, log_t: f64) -> f64 {
        let lps = &self.log_breakpoints;
        let k = lps.partition_point(|lp| *lp < log_t);
        if k < lps.len() && lps[k] == log_t {
            return self.anchor_values[k];
        }
        if k == 0 {
            return self.anchor_values[0] * (log_t.max(0.0) / lps[0]);
        }
        let (a, b) = if self.segments.is_empty() {
            // single anchor: continue the below-p1 ray
            (0.0, self.anchor_values[0] / lps[0])
        } else if k >= lps.len() {
            *self.segments.last().unwrap()
        } else {
            self.segments[k - 1]
        };
        a + b * log_t
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_log(t.ln())
    }

    /// Breakpoints `p_k = e^{log p_k}`; may overflow to infinity for display
    /// purposes only.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.log_breakpoints.iter().map(|lp| lp.exp()).collect()
    }

    /// Structural invariants: monotone breakpoints, positive slopes,
    /// continuity at breakpoints, and the growth anchor
    /// `h(p_k)/log p_k > k/2`.
    pub fn validate(&self) -> Result<()> {
        let n = self.log_breakpoints.len();
        if n == 0 || self.anchors_c.len() != n || self.anchor_values.len() != n {
            return Err(Error::InternalCheck("empty or ragged growth data".into()));
        }
        if self.log_breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InternalCheck(
                "breakpoints not strictly increasing".into(),
            ));
        }
        if self.segments.len() + 1 != n && !(n == 1 && self.segments.is_empty()) {
            return Err(Error::InternalCheck("segment count mismatch".into()));
        }
        for (k, &(a, b)) in self.segments.iter().enumerate() {
            if b <= 0.0 {
                return Err(Error::InternalCheck(format!("segment {k} slope {b} <= 0")));
            }
            // continuity at the right endpoint of the segment
            let lp = self.log_breakpoints[k + 1];
            let v = a + b * lp;
            let anchor = self.anchor_values[k + 1];
            if (v - anchor).abs() > 1e-9 * (1.0 + anchor.abs()) {
                return Err(Error::InternalCheck(format!(
                    "discontinuity at breakpoint {}: {} vs {}",
                    k + 1,
                    v,
                    anchor
                )));
            }
        }
        for (i, (&lp, &hv)) in self
            .log_breakpoints
            .iter()
            .zip(&self.anchor_values)
            .enumerate()
        {
            let k = (i + 1) as f64;
            if hv / lp <= k / 2.0 {
                return Err(Error::InternalCheck(format!(
                    "growth anchor failed at k = {}: {} / {} <= {}",
                    i + 1,
                    hv,
                    lp,
                    k / 2.0
                )));
            }
        }
        Ok(())
    }
}

/// The three anchor-constant conditions at step `k` (1-based), with all
/// exponentials compared in log form:
/// `1 < c_k`; `c_{k-1} < c_k e^{c_{k-1}} R_{k-1} < e^{c_k} R_k`;
/// `c_k (k+1) / (c_k + log R_k) > k/2`.
fn anchor_conditions_hold(c: f64, k: usize, log_r_k: f64, prev: Option<(f64, f64)>) -> bool {
    if c <= 1.0 {
        return false;
    }
    if let Some((c_prev, log_r_prev)) = prev {
        let log_mid = c.ln() + c_prev + log_r_prev; // log(c_k e^{c_{k-1}} R_{k-1})
        if c_prev.ln() >= log_mid || log_mid >= c + log_r_k {
            return false;
        }
    }
    let k = k as f64;
    c * (k + 1.0) / (c + log_r_k) > k / 2.0
}

/// Deterministic anchor-constant choice: the smallest rung of a doubling
/// ladder satisfying [`anchor_conditions_hold`]. Step 1 starts the ladder at
/// 2; step `k` starts at `c_{k-1} + 1`.
fn choose_anchor_c(k: usize, log_r_k: f64, prev: Option<(f64, f64)>) -> Result<f64> {
    let base = match prev {
        None => 2.0,
        Some((c_prev, _)) => c_prev + 1.0,
    };
    let mut c = base;
    for _ in 0..1024 {
        if anchor_conditions_hold(c, k, log_r_k, prev) {
            return Ok(c);
        }
        c *= 2.0;
        if !c.is_finite() {
            break;
        }
    }
    Err(Error::Precondition(format!(
        "no admissible anchor constant at step {k}"
    )))
}

/// Build the piecewise log-linear growth function attached to the first
/// `k_max` entries of a threshold sequence. Central property (used by
/// [`verify_threshold_contrapositive`]): if a set has more than `k` points
/// inside radius `R_k`, then `N(p_k, D) >= (k+1) log(p_k/R_k) = h(p_k)`.
pub fn growth_from_thresholds(
    thresholds: &ThresholdSequence,
    k_max: usize,
) -> Result<PiecewiseLogGrowth> {
    if k_max == 0 || thresholds.len() < k_max {
        return Err(Error::Precondition(format!(
            "need 1 <= k_max <= {} threshold entries, got k_max = {}",
            thresholds.len(),
            k_max
        )));
    }
    let mut anchors_c = Vec::with_capacity(k_max);
    let mut log_breakpoints = Vec::with_capacity(k_max);
    let mut anchor_values = Vec::with_capacity(k_max);
    let mut prev: Option<(f64, f64)> = None;
    for k in 1..=k_max {
        let log_r_k = thresholds.values()[k - 1].ln();
        let c = choose_anchor_c(k, log_r_k, prev)?;
        anchors_c.push(c);
        log_breakpoints.push(c + log_r_k);
        anchor_values.push(c * (k + 1) as f64);
        prev = Some((c, log_r_k));
    }
    let segments = (0..k_max.saturating_sub(1))
        .map(|i| {
            let b = (anchor_values[i + 1] - anchor_values[i])
                / (log_breakpoints[i + 1] - log_breakpoints[i]);
            let a = anchor_values[i] - b * log_breakpoints[i];
            (a, b)
        })
        .collect();
    let plg = PiecewiseLogGrowth {
        log_breakpoints,
        anchors_c,
        anchor_values,
        segments,
    };
    plg.validate()?;
    Ok(plg)
}

/// Certificate for the contrapositive direction: a threshold violation at
/// step `k` forces the integrated counting function up to the growth anchor.
#[derive(Clone, Debug, Serialize)]
pub struct ContrapositiveReport {
    /// First violating step, 1-based; `None` makes the statement vacuous.
    pub violation_k: Option<usize>,
    /// `log p_k` at the violation.
    pub log_radius: Option<f64>,
    /// `h(p_k)`.
    pub growth_value: Option<f64>,
    /// `N(p_k, D)`.
    pub counting_value: Option<f64>,
    /// `N(p_k, D) - h(p_k)`; nonnegative up to float error when non-vacuous.
    pub margin: Option<f64>,
    pub vacuous: bool,
}

pub fn verify_threshold_contrapositive(
    set: &DiscreteSet,
    thresholds: &ThresholdSequence,
    k_max: usize,
) -> Result<ContrapositiveReport> {
    let growth = growth_from_thresholds(thresholds, k_max)?;
    let prefix = ThresholdSequence::new(thresholds.values()[..k_max].to_vec())?;
    let violation = check_threshold_condition(set, &prefix)?;
    match violation {
        None => Ok(ContrapositiveReport {
            violation_k: None,
            log_radius: None,
            growth_value: None,
            counting_value: None,
            margin: None,
            vacuous: true,
        }),
        Some(k) => {
            let log_p = growth.log_breakpoints[k - 1];
            let h_p = growth.anchor_values[k - 1];
            let sorted = sorted_rhos(set)?;
            let big_n = counting_big_n_from(&sorted, log_p);
            Ok(ContrapositiveReport {
                violation_k: Some(k),
                log_radius: Some(log_p),
                growth_value: Some(h_p),
                counting_value: Some(big_n),
                margin: Some(big_n - h_p),
                vacuous: false,
            })
        }
    }
}
