//! Maximum likelihood by fixed-point iteration, with divergence diagnostics.
//!
//! The map is `φ_i(β) = log d_i − log Σ_{s} exp(β̃_s)/(1 + exp(β̃_s + β_i))`, the
//! inner sum running over the (k−1)-subsets `s` not containing `i` (and over all
//! sizes for the general model). Multiplying the summand by `exp(β_i)` gives the
//! edge probability, so `φ_i(β) = β_i + log d_i − log E_i(β)` where `E_i` is the
//! expected degree; one evaluation is one pass over the edge space.
//!
//! Iteration starts at `β = 0` and stops on:
//!
//! * convergence: sup-norm step `≤ tol`;
//! * unbounded growth: some `|β_i| > B` while `max|β|` exceeds its value `W`
//!   iterations earlier, or a power-law (sub-geometric) drift of the steps while
//!   `max|β|` keeps growing, which is how iterates escape at the boundary of the
//!   degree polytope;
//! * a cycle: a non-adjacent iterate among the last `W` recurs within `1e-8`;
//! * the iteration budget.
//!
//! For edge sizes `k ≥ 3` the undamped map can lock into a period-2 cycle in
//! sparse regimes even when the MLE exists. [`Damping::Fallback`] therefore
//! retries with relaxed steps `β + ω(φ(β) − β)`, `ω = 2/(r+1)` and then
//! `ω = 1/r` (`r` the largest edge size); the last is generalized iterative
//! scaling, which increases the likelihood monotonically.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{DegreeSequence, EdgeSpace};
use crate::model::{expected_flat, grad_psi, ModelSpec, ParamVector, Variant};
use crate::numeric::{sup_distance, sup_norm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitStatus {
    Converged,
    DivergedUnbounded,
    DivergedPeriodic,
    #[serde(rename = "max_iter")]
    MaxIterExceeded,
    BoundaryDegrees,
}

impl FitStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            FitStatus::Converged => "converged",
            FitStatus::DivergedUnbounded => "diverged_unbounded",
            FitStatus::DivergedPeriodic => "diverged_periodic",
            FitStatus::MaxIterExceeded => "max_iter",
            FitStatus::BoundaryDegrees => "boundary_degrees",
        }
    }
}

impl fmt::Display for FitStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Step relaxation for `β ← β + ω(φ(β) − β)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Damping {
    /// Undamped first; on failure restart with `ω = 2/(r+1)`, then `ω = 1/r`.
    #[default]
    Fallback,
    /// The plain iteration `β ← φ(β)`.
    None,
    /// A single run with the given `ω ∈ (0, 1]`.
    Fixed(f64),
}

impl Damping {
    fn schedule(&self, max_size: usize) -> Vec<f64> {
        let r = max_size as f64;
        match *self {
            Damping::Fallback => vec![1.0, 2.0 / (r + 1.0), 1.0 / r],
            Damping::None => vec![1.0],
            Damping::Fixed(w) => vec![w],
        }
    }
}

impl fmt::Display for Damping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Damping::Fallback => f.write_str("fallback"),
            Damping::None => f.write_str("none"),
            Damping::Fixed(w) => write!(f, "{w}"),
        }
    }
}

impl std::str::FromStr for Damping {
    type Err = Error;

    /// `fallback`, `none`, or a relaxation factor in `(0, 1]`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fallback" => Ok(Damping::Fallback),
            "none" => Ok(Damping::None),
            _ => match s.parse::<f64>() {
                Ok(w) if w > 0.0 && w <= 1.0 => Ok(Damping::Fixed(w)),
                _ => Err(Error::InvalidOption(format!(
                    "damping must be `fallback`, `none` or a number in (0, 1], got `{s}`"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub divergence_bound: f64,
    pub period_window: usize,
    pub damping: Damping,
    /// Record one [`TraceRow`] per iteration.
    pub trace: bool,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 5000,
            divergence_bound: 30.0,
            period_window: 50,
            damping: Damping::Fallback,
            trace: false,
        }
    }
}

impl FixedPointOptions {
    fn check(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidOption("tol must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidOption("max_iter must be positive".into()));
        }
        if self.period_window < 2 {
            return Err(Error::InvalidOption(
                "period_window must be at least 2".into(),
            ));
        }
        if let Damping::Fixed(w) = self.damping {
            if !(w > 0.0 && w <= 1.0) {
                return Err(Error::InvalidOption(format!("damping {w} outside (0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    /// Sup-norm of the update.
    pub step: f64,
    /// `max|β_i|` after the update.
    pub max_abs_beta: f64,
    /// Sup-norm of `E(β) − d` before the update.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub beta: ParamVector,
    pub status: FitStatus,
    /// Total iterations over all damping phases.
    pub iterations: usize,
    pub final_step: f64,
    /// `‖grad ψ(β̂) − d‖∞`.
    pub moment_residual: f64,
    /// Relaxation factor of the phase that produced `beta`.
    pub omega: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<Vec<TraceRow>>,
}

fn check_positive(values: &[f64], size: Option<usize>) -> Result<()> {
    match values.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        Some((i, &value)) => Err(Error::NonpositiveDegree {
            label: i + 1,
            size,
            value,
        }),
        None => Ok(()),
    }
}

/// One relaxed step in flattened coordinates; returns the expected degrees at `beta`.
fn step_into(
    spec: &ModelSpec,
    beta: &[f64],
    log_target: &[f64],
    omega: f64,
    out: &mut Vec<f64>,
) -> Vec<f64> {
    let expected = expected_flat(spec, beta);
    out.clear();
    out.extend(
        beta.iter()
            .zip(log_target)
            .zip(&expected)
            .map(|((b, lt), e)| b + omega * (lt - e.ln())),
    );
    expected
}

/// `φ(β)` for any variant; `d` supplies the statistic the variant needs.
pub fn phi(spec: &ModelSpec, beta: &ParamVector, d: &DegreeSequence) -> Result<ParamVector> {
    spec.check_params(beta)?;
    let target = spec.statistic(d)?;
    match &target {
        ParamVector::Shared(t) => check_positive(t, None)?,
        ParamVector::Layered(layers) => {
            for (k, t) in layers {
                check_positive(t, Some(*k))?;
            }
        }
    }
    let log_target: Vec<f64> = target.flat().iter().map(|t| t.ln()).collect();
    let mut out = Vec::new();
    step_into(spec, &beta.flat(), &log_target, 1.0, &mut out);
    spec.from_flat(out)
}

/// `φ` for the k-uniform model.
pub fn phi_uniform(space: &EdgeSpace, beta: &[f64], d: &[f64]) -> Result<Vec<f64>> {
    let spec = ModelSpec::new(space.clone(), Variant::Uniform)?;
    let d = DegreeSequence::from_totals(d.to_vec())?;
    Ok(phi(&spec, &ParamVector::Shared(beta.to_vec()), &d)?.flat())
}

/// `φ` for the layered model: each layer is updated by the uniform map of its size.
pub fn phi_layered(
    space: &EdgeSpace,
    beta: &ParamVector,
    d: &DegreeSequence,
) -> Result<ParamVector> {
    let spec = ModelSpec::new(space.clone(), Variant::Layered)?;
    phi(&spec, beta, d)
}

/// `φ` for the general model, summing over all edge sizes.
pub fn phi_general(space: &EdgeSpace, beta: &[f64], d: &[f64]) -> Result<Vec<f64>> {
    let spec = ModelSpec::new(space.clone(), Variant::General)?;
    let d = DegreeSequence::from_totals(d.to_vec())?;
    Ok(phi(&spec, &ParamVector::Shared(beta.to_vec()), &d)?.flat())
}

/// `grad ψ(β) − d`, shaped like `beta`.
pub fn check_moment_equations(
    spec: &ModelSpec,
    beta: &ParamVector,
    d: &DegreeSequence,
) -> Result<ParamVector> {
    let grad = grad_psi(spec, beta)?.flat();
    let target = spec.statistic(d)?.flat();
    spec.from_flat(grad.iter().zip(&target).map(|(g, t)| g - t).collect())
}

struct Phase {
    beta: Vec<f64>,
    status: FitStatus,
    iterations: usize,
    final_step: f64,
}

/// Mean of `steps[m-w..m]`.
fn block_mean(steps: &[f64], m: usize, w: usize) -> f64 {
    steps[m - w..m].iter().sum::<f64>() / w as f64
}

/// Power-law decay of the step sizes: `r1 = s(l)/s(l/2)` and `r2 = s(l/2)/s(l/4)`
/// sit inside (0, 1) and `r1` has not dropped below `r2`. Power laws `l^-a` with
/// corrections approach `2^-a` from below; geometric tails, including slow
/// transients, have `r1 < r2` (`r1 = r2²` exactly for `ρ^l`).
fn sublinear_drift(steps: &[f64], w: usize) -> bool {
    let l = steps.len();
    let (s1, s2, s4) = (
        block_mean(steps, l, w),
        block_mean(steps, l / 2, w),
        block_mean(steps, l / 4, w),
    );
    if !(s2 > 0.0 && s4 > 0.0) {
        return false;
    }
    let (r1, r2) = (s1 / s2, s2 / s4);
    let band = 0.2..=0.9;
    band.contains(&r1) && band.contains(&r2) && (0.0..=0.1).contains(&(r1 - r2))
}

fn run_phase(
    spec: &ModelSpec,
    log_target: &[f64],
    target: &[f64],
    opts: &FixedPointOptions,
    omega: f64,
    trace: &mut Option<Vec<TraceRow>>,
    iteration_offset: usize,
) -> Phase {
    let w = opts.period_window;
    let mut beta = vec![0.0; spec.dim()];
    let mut next = Vec::with_capacity(beta.len());
    let mut history: VecDeque<Vec<f64>> = VecDeque::with_capacity(w + 1);
    let mut max_abs: VecDeque<f64> = VecDeque::with_capacity(w + 1);
    let mut steps: Vec<f64> = Vec::new();
    max_abs.push_back(0.0);

    let mut status = FitStatus::MaxIterExceeded;
    let mut final_step = f64::NAN;
    let mut l = 0;
    while l < opts.max_iter {
        l += 1;
        let expected = step_into(spec, &beta, log_target, omega, &mut next);
        let step = sup_distance(&next, &beta);
        let m = sup_norm(&next);
        final_step = step;
        if let Some(rows) = trace.as_mut() {
            rows.push(TraceRow {
                iteration: iteration_offset + l,
                step,
                max_abs_beta: m,
                residual: sup_distance(&expected, target),
            });
        }
        let blown = !step.is_finite() || next.iter().any(|b| !b.is_finite());
        let previous = std::mem::replace(&mut beta, std::mem::take(&mut next));
        if blown {
            beta = previous;
            status = FitStatus::DivergedUnbounded;
            break;
        }
        if step <= opts.tol {
            status = FitStatus::Converged;
            break;
        }
        steps.push(step);

        let earlier = *max_abs.front().expect("non-empty");
        let window_full = max_abs.len() > w;
        if window_full && m > opts.divergence_bound && m > earlier {
            status = FitStatus::DivergedUnbounded;
            break;
        }
        // history holds β_(l-1-W) .. β_(l-2): every stored iterate is non-adjacent.
        let recur = history.iter().any(|h| {
            let dist = sup_distance(h, &beta);
            dist <= 1e-8 && dist <= 1e-3 * step
        });
        if recur {
            status = FitStatus::DivergedPeriodic;
            break;
        }
        if l >= 8 * w && l % w == 0 && window_full && m > earlier && sublinear_drift(&steps, w) {
            status = FitStatus::DivergedUnbounded;
            break;
        }

        let recycled = if history.len() == w {
            history.pop_front()
        } else {
            None
        };
        let mut slot = recycled.unwrap_or_default();
        slot.clear();
        slot.extend_from_slice(&previous);
        history.push_back(slot);
        next = previous;
        if max_abs.len() > w {
            max_abs.pop_front();
        }
        max_abs.push_back(m);
    }
    Phase {
        beta,
        status,
        iterations: l,
        final_step,
    }
}

/// Fits `spec` to the (average) degree sequence `d` by fixed-point iteration from `β = 0`.
///
/// Degrees at 0 or at their maximum return [`FitStatus::BoundaryDegrees`]
/// without iterating. Divergence and the iteration budget are statuses, not errors.
pub fn fit_fixed_point(
    spec: &ModelSpec,
    d: &DegreeSequence,
    opts: &FixedPointOptions,
) -> Result<FitResult> {
    opts.check()?;
    let target = spec.statistic(d)?.flat();
    let max = spec.max_statistic();
    let mut trace = opts.trace.then(Vec::new);

    let on_boundary = target.iter().zip(&max).any(|(t, m)| *t <= 0.0 || *t >= *m);
    if on_boundary {
        let zeros = vec![0.0; spec.dim()];
        let expected = expected_flat(spec, &zeros);
        return Ok(FitResult {
            beta: spec.from_flat(zeros)?,
            status: FitStatus::BoundaryDegrees,
            iterations: 0,
            final_step: 0.0,
            moment_residual: sup_distance(&expected, &target),
            omega: 1.0,
            trace,
        });
    }

    let log_target: Vec<f64> = target.iter().map(|t| t.ln()).collect();
    let mut iterations = 0;
    let mut last = None;
    let mut omega = 1.0;
    for w in opts.damping.schedule(spec.space().max_size()) {
        let phase = run_phase(spec, &log_target, &target, opts, w, &mut trace, iterations);
        iterations += phase.iterations;
        omega = w;
        let done = phase.status == FitStatus::Converged;
        last = Some(phase);
        if done {
            break;
        }
    }
    let phase = last.expect("at least one damping phase");
    let expected = expected_flat(spec, &phase.beta);
    Ok(FitResult {
        moment_residual: sup_distance(&expected, &target),
        beta: spec.from_flat(phase.beta)?,
        status: phase.status,
        iterations,
        final_step: phase.final_step,
        omega,
        trace,
    })
}
