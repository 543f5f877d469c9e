//! Iterative proportional scaling on symmetric tables with structural zeros.
//!
//! The `n × … × n` table of the uniform model (or the `(n+1)`-label table with
//! `∅` slots of the general model) is stored canonically: one cell value `a_e`
//! per edge, standing for every permutation of its slots. Node `i`'s layer margin
//! is `M_i = Σ_{e∋i} mult(|e|) · a_e` where `mult(j) = (r−1)!/(r−j)!` counts the
//! cells of a size-j tuple with `i` in the first slot (`r` slots, `r−j` of them
//! `∅`). `p_e = mult(|e|) · a_e` is the fitted edge probability.
//!
//! Each step multiplies a cell by the geometric mean `(Π_b F_{i_b})^{1/r}` of the
//! margin factors `F_i = d_i / M_i` (`∅` slots contribute 1) and then rescales
//! the cell together with its complement cell `1 − p_e` so that the two sum to 1.
//! Without the complement the iteration would fit a log-linear table whose
//! entries can exceed 1; with it the update is `logit p_e += (1/r) Σ_{i∈e} log F_i`,
//! generalized iterative scaling for the beta model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixedpoint::FitStatus;
use crate::hypergraph::{for_each_subset, DegreeSequence, Edge, EdgeSpace};
use crate::numeric::{
    binomial, binomial_f64, factorial, falling_factorial, sigmoid, sigmoid_complement,
    CompensatedSum,
};

/// Probabilities within this distance of 0 or 1 mark a boundary fit.
pub const BOUNDARY_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IpsOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for IpsOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 100_000,
        }
    }
}

/// A canonical table: per edge, the presence probability and its complement.
#[derive(Debug, Clone, PartialEq)]
pub struct IpsTable {
    space: EdgeSpace,
    slots: usize,
    p: Vec<f64>,
    q: Vec<f64>,
}

/// The k-way table of the uniform model.
pub type SymmetricTable = IpsTable;
/// The `(∅, 1, …, n)` table of the general model.
pub type GeneralTable = IpsTable;

impl IpsTable {
    pub fn space(&self) -> &EdgeSpace {
        &self.space
    }

    /// Number of table slots `r` (the largest edge size).
    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Cells of the full table with a given node in the first slot, for a size-j tuple.
    pub fn multiplicity(&self, j: usize) -> f64 {
        falling_factorial(self.slots - 1, j - 1)
    }

    /// Edge probabilities in enumeration order.
    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    /// `(e, p_e)` in enumeration order.
    pub fn iter(&self) -> impl Iterator<Item = (Edge, f64)> + '_ {
        self.space.edges().zip(self.p.iter().copied())
    }

    /// Full-table cell value of every canonical tuple, in enumeration order.
    pub fn cell_values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.p.len());
        self.for_each_edge(|idx, e| out.push(self.p[idx] / self.multiplicity(e.len())));
        out
    }

    /// Layer margins `M_i`.
    pub fn margins(&self) -> Vec<f64> {
        let n = self.space.n();
        let mut acc = vec![CompensatedSum::default(); n];
        self.for_each_edge(|idx, e| {
            for &i in e {
                acc[i].add(self.p[idx]);
            }
        });
        acc.iter().map(|a| a.value()).collect()
    }

    /// Whether some probability lies within [`BOUNDARY_EPS`] of 0 or 1.
    pub fn on_boundary(&self) -> bool {
        self.p
            .iter()
            .zip(&self.q)
            .any(|(p, q)| *p < BOUNDARY_EPS || *q < BOUNDARY_EPS)
    }

    fn for_each_edge(&self, mut f: impl FnMut(usize, &[usize])) {
        let mut idx = 0;
        for &k in self.space.sizes() {
            for_each_subset(self.space.n(), k, |e| {
                f(idx, e);
                idx += 1;
            });
        }
    }

    fn with_density(space: &EdgeSpace, density: f64) -> Self {
        let m = space.edge_count();
        Self {
            slots: space.max_size(),
            space: space.clone(),
            p: vec![density; m],
            q: vec![1.0 - density; m],
        }
    }
}

fn check_targets(space: &EdgeSpace, d: &[f64]) -> Result<()> {
    if d.len() != space.n() {
        return Err(Error::DimensionMismatch(format!(
            "expected {} degrees, got {}",
            space.n(),
            d.len()
        )));
    }
    if let Some((i, v)) = d
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || **v < 0.0)
    {
        return Err(Error::InvalidDegrees(format!(
            "node {} has degree {v}",
            i + 1
        )));
    }
    Ok(())
}

/// Initial k-way table: every non-zero cell holds `2ē / n(n−1)⋯(n−k+1)`.
pub fn ips_init(space: &EdgeSpace, d: &[f64]) -> Result<SymmetricTable> {
    if space.sizes().len() != 1 {
        return Err(Error::InvalidSpace(format!(
            "a symmetric table needs one edge size, got {:?}",
            space.sizes()
        )));
    }
    check_targets(space, d)?;
    let k = space.max_size();
    let cell = d.iter().sum::<f64>() / falling_factorial(space.n(), k);
    Ok(IpsTable::with_density(space, cell * factorial(k - 1)))
}

/// Initial general table: `logit p_e = |e|·c`, the model with all `β_i = c`, where
/// `c` makes the total margin `Σ_j j·C(n, j)·σ(j c)` equal `Σ_i d_i`. Starting
/// inside the additive family keeps the scaling iterates in it.
pub fn ips_init_general(space: &EdgeSpace, d: &[f64]) -> Result<GeneralTable> {
    check_targets(space, d)?;
    let weights: Vec<(f64, f64)> = space
        .sizes()
        .iter()
        .map(|&j| (j as f64, j as f64 * binomial_f64(space.n(), j)))
        .collect();
    let total = |c: f64| {
        weights
            .iter()
            .map(|&(j, w)| w * sigmoid(j * c))
            .sum::<f64>()
    };
    let target = d.iter().sum::<f64>();
    let max: f64 = weights.iter().map(|&(_, w)| w).sum();
    if target <= 0.0 || target >= max {
        return Ok(IpsTable::with_density(
            space,
            if target <= 0.0 { 0.0 } else { 1.0 },
        ));
    }
    let (mut lo, mut hi) = (-1.0, 1.0);
    while total(lo) > target {
        lo *= 2.0;
    }
    while total(hi) < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if total(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c = 0.5 * (lo + hi);
    let mut table = IpsTable::with_density(space, 0.0);
    let (p, q) = (&mut table.p, &mut table.q);
    table.space.sizes().iter().fold(0, |start, &k| {
        let len = binomial(space.n(), k) as usize;
        p[start..start + len].fill(sigmoid(k as f64 * c));
        q[start..start + len].fill(sigmoid_complement(k as f64 * c));
        start + len
    });
    Ok(table)
}

/// One scaling step. Returns `max_i |M_i − d_i|` of the table before the step.
pub fn ips_step(table: &mut IpsTable, d: &[f64]) -> Result<f64> {
    check_targets(&table.space, d)?;
    let margins = table.margins();
    let residual = crate::numeric::sup_distance(&margins, d);
    let mut log_f = Vec::with_capacity(d.len());
    for (i, (&m, &t)) in margins.iter().zip(d).enumerate() {
        if m <= 0.0 && t > 0.0 {
            return Err(Error::ZeroMarginWithPositiveTarget {
                label: i + 1,
                target: t,
            });
        }
        log_f.push(if m <= 0.0 { 0.0 } else { (t / m).ln() });
    }
    let exponent = 1.0 / table.slots as f64;
    let (p, q) = (&mut table.p, &mut table.q);
    let mut idx = 0;
    for &k in table.space.sizes() {
        for_each_subset(table.space.n(), k, |e| {
            let g = (exponent * e.iter().map(|&i| log_f[i]).sum::<f64>()).exp();
            let scaled = p[idx] * g;
            let norm = scaled + q[idx];
            p[idx] = scaled / norm;
            q[idx] /= norm;
            idx += 1;
        });
    }
    Ok(residual)
}

/// A converged (or exhausted) scaling run.
#[derive(Debug, Clone, PartialEq)]
pub struct IpsFit {
    pub table: IpsTable,
    /// `Converged` or `MaxIterExceeded`.
    pub status: FitStatus,
    pub iterations: usize,
    /// `max_i |M_i − d_i|` of the returned table.
    pub margin_residual: f64,
    /// Some probability is within [`BOUNDARY_EPS`] of 0 or 1: the MLE does not exist.
    pub boundary: bool,
}

fn run(mut table: IpsTable, d: &[f64], opts: &IpsOptions) -> Result<IpsFit> {
    if !(opts.tol > 0.0) || opts.max_iter == 0 {
        return Err(Error::InvalidOption(
            "IPS needs tol > 0 and max_iter > 0".into(),
        ));
    }
    let mut iterations = 0;
    let status = loop {
        let residual = crate::numeric::sup_distance(&table.margins(), d);
        if residual <= opts.tol {
            break FitStatus::Converged;
        }
        if iterations == opts.max_iter {
            break FitStatus::MaxIterExceeded;
        }
        ips_step(&mut table, d)?;
        iterations += 1;
    };
    Ok(IpsFit {
        margin_residual: crate::numeric::sup_distance(&table.margins(), d),
        boundary: table.on_boundary(),
        table,
        status,
        iterations,
    })
}

/// Fits the k-uniform table to the degrees `d`.
pub fn ips_fit(space: &EdgeSpace, d: &[f64], opts: &IpsOptions) -> Result<IpsFit> {
    run(ips_init(space, d)?, d, opts)
}

/// Fits one table per edge size against the per-size degrees.
pub fn ips_fit_layered(
    space: &EdgeSpace,
    d: &DegreeSequence,
    opts: &IpsOptions,
) -> Result<Vec<(usize, IpsFit)>> {
    space
        .sizes()
        .iter()
        .map(|&k| {
            let layer = match d.layer(k) {
                Some(v) => v,
                None if !d.has_layers() && space.sizes().len() == 1 => d.total(),
                None => {
                    return Err(Error::InvalidDegrees(format!(
                        "the layered model needs size-{k} degrees"
                    )))
                }
            };
            let sub = space.layer(k)?;
            ips_fit(&sub, layer, opts)
                .map(|fit| (k, fit))
                .map_err(|e| e.in_layer(k))
        })
        .collect()
}

/// Fits the general table to total degrees, never fitting the `∅` margin.
pub fn ips_fit_general(space: &EdgeSpace, d: &[f64], opts: &IpsOptions) -> Result<IpsFit> {
    run(ips_init_general(space, d)?, d, opts)
}

/// Least-squares node parameters from a probability table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogitFit {
    pub beta: Vec<f64>,
    /// `max_e |β̃_e − logit p_e|`.
    pub inconsistency: f64,
}

/// Solves `Σ_{i∈e} β_i ≈ logit p_e` in least squares over every edge of the table.
///
/// With `A = Σ_k C(n−1,k−1)`, `B = Σ_k C(n−2,k−2)` and `S_i = Σ_{e∋i} logit p_e`
/// the normal equations have the closed form
/// `β_i = (S_i − B·T)/(A − B)`, `T = Σ_i S_i / (A + (n−1)B)`.
pub fn logits_to_beta(table: &IpsTable) -> Result<LogitFit> {
    let space = &table.space;
    let n = space.n();
    let a: f64 = space
        .sizes()
        .iter()
        .map(|&k| binomial_f64(n - 1, k - 1))
        .sum();
    let b: f64 = space
        .sizes()
        .iter()
        .map(|&k| binomial_f64(n - 2, k - 2))
        .sum();
    if a == b {
        return Err(Error::DegenerateDesign {
            n,
            k: space.max_size(),
        });
    }
    let mut logits = Vec::with_capacity(table.p.len());
    let mut s = vec![CompensatedSum::default(); n];
    let mut failure = None;
    table.for_each_edge(|idx, e| {
        let (p, q) = (table.p[idx], table.q[idx]);
        if failure.is_none() && (p <= 0.0 || q <= 0.0) {
            failure = Some(Error::ProbabilityOnBoundary {
                edge: e.iter().map(|v| v + 1).collect(),
                p,
            });
        }
        let z = p.ln() - q.ln();
        logits.push(z);
        for &i in e {
            s[i].add(z);
        }
    });
    if let Some(err) = failure {
        return Err(err);
    }
    let s: Vec<f64> = s.iter().map(|x| x.value()).collect();
    let t = s.iter().sum::<f64>() / (a + (n as f64 - 1.0) * b);
    let beta: Vec<f64> = s.iter().map(|si| (si - b * t) / (a - b)).collect();
    let mut inconsistency = 0.0_f64;
    table.for_each_edge(|idx, e| {
        let fitted: f64 = e.iter().map(|&i| beta[i]).sum();
        inconsistency = inconsistency.max((fitted - logits[idx]).abs());
    });
    Ok(LogitFit {
        beta,
        inconsistency,
    })
}
