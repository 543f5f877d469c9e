//! MLE-existence diagnostics: boundary screening and fixed-density scans.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixedpoint::{fit_fixed_point, FitStatus, FixedPointOptions};
use crate::hypergraph::{degrees, DegreeSequence, EdgeSpace};
use crate::model::ModelSpec;
use crate::numeric::round_sig;
use crate::sampler::{sample_fixed_density, splitmix64, SampleConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Exists,
    NotExists,
    Undetermined,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Exists => "exists",
            Verdict::NotExists => "not_exists",
            Verdict::Undetermined => "undetermined",
        }
    }

    /// Two-valued form: undetermined counts as not existing.
    pub fn exists_binary(&self) -> bool {
        *self == Verdict::Exists
    }
}

impl From<FitStatus> for Verdict {
    fn from(s: FitStatus) -> Self {
        match s {
            FitStatus::Converged => Verdict::Exists,
            FitStatus::DivergedUnbounded
            | FitStatus::DivergedPeriodic
            | FitStatus::BoundaryDegrees => Verdict::NotExists,
            FitStatus::MaxIterExceeded => Verdict::Undetermined,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    ZeroDegree,
    MaximalDegree,
}

/// Evidence that the observed statistic lies on the boundary of the degree polytope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCertificate {
    /// 1-based node label.
    pub node: usize,
    /// Edge size of the offending layer; `None` for total degrees.
    pub size: Option<usize>,
    pub degree: f64,
    pub kind: BoundaryKind,
}

/// Looks for a node of total degree 0, or of maximal degree `C(n−1, k−1)` in some
/// size layer (or maximal total degree). `None` does not imply that the MLE exists.
///
/// Per-size certificates concern models with a parameter vector per size
/// (uniform, layered); the general model only sees total degrees.
pub fn screen_boundary(space: &EdgeSpace, d: &DegreeSequence) -> Option<BoundaryCertificate> {
    if let Some((i, &v)) = d.total().iter().enumerate().find(|(_, v)| **v <= 0.0) {
        return Some(BoundaryCertificate {
            node: i + 1,
            size: None,
            degree: v,
            kind: BoundaryKind::ZeroDegree,
        });
    }
    for layer in d.layers() {
        if !space.contains_size(layer.size) {
            continue;
        }
        let max = space.max_degree(layer.size);
        if let Some((i, &v)) = layer.values.iter().enumerate().find(|(_, v)| **v >= max) {
            return Some(BoundaryCertificate {
                node: i + 1,
                size: Some(layer.size),
                degree: v,
                kind: BoundaryKind::MaximalDegree,
            });
        }
    }
    let max = space.max_total_degree();
    d.total()
        .iter()
        .enumerate()
        .find(|(_, v)| **v >= max)
        .map(|(i, &v)| BoundaryCertificate {
            node: i + 1,
            size: None,
            degree: v,
            kind: BoundaryKind::MaximalDegree,
        })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub density: f64,
    pub replicate: usize,
    pub verdict: Verdict,
    pub status: FitStatus,
    pub iterations: usize,
    pub max_abs_beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExistenceScan {
    pub spec: ModelSpec,
    pub densities: Vec<f64>,
    pub replicates: usize,
    /// Ordered by density, then replicate.
    pub records: Vec<ScanRecord>,
}

impl ExistenceScan {
    fn at(&self, j: usize) -> &[ScanRecord] {
        &self.records[j * self.replicates..(j + 1) * self.replicates]
    }

    /// `(density, fraction of replicates whose MLE exists)`.
    pub fn fraction_exists(&self) -> Vec<(f64, f64)> {
        self.fraction_of(Verdict::Exists)
    }

    pub fn fraction_undetermined(&self) -> Vec<(f64, f64)> {
        self.fraction_of(Verdict::Undetermined)
    }

    fn fraction_of(&self, v: Verdict) -> Vec<(f64, f64)> {
        (0..self.densities.len())
            .map(|j| {
                let hits = self.at(j).iter().filter(|r| r.verdict == v).count();
                (self.densities[j], hits as f64 / self.replicates as f64)
            })
            .collect()
    }

    /// `density,replicate,verdict,iterations,max_abs_beta`
    pub fn detail_csv(&self) -> String {
        let mut out = String::from("density,replicate,verdict,iterations,max_abs_beta\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                round_sig(r.density),
                r.replicate,
                r.verdict,
                r.iterations,
                round_sig(r.max_abs_beta)
            );
        }
        out
    }

    /// `density,fraction_exists`
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("density,fraction_exists\n");
        for (d, f) in self.fraction_exists() {
            let _ = writeln!(out, "{},{}", round_sig(d), round_sig(f));
        }
        out
    }
}

/// Seed of the sampling stream for the `j`-th density.
fn density_seed(seed: u64, j: usize) -> u64 {
    splitmix64(seed ^ splitmix64(!(j as u64)))
}

/// For each density, draws `cfg.replicates` uniform hypergraphs with that edge
/// density and fits `spec` to each one's exact degrees.
pub fn scan_existence(
    spec: &ModelSpec,
    densities: &[f64],
    cfg: &SampleConfig,
    opts: &FixedPointOptions,
) -> Result<ExistenceScan> {
    if densities.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidOption(
            "densities must be sorted ascending".into(),
        ));
    }
    let space = spec.space();
    let graphs = densities
        .iter()
        .enumerate()
        .map(|(j, &rho)| {
            let c = SampleConfig::new(density_seed(cfg.seed, j), cfg.replicates);
            sample_fixed_density(space, rho, &c)
        })
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..densities.len())
        .flat_map(|j| (0..cfg.replicates).map(move |r| (j, r)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(j, r)| {
            let d = degrees(&graphs[j][r], space)?;
            let fit = fit_fixed_point(spec, &d, opts)?;
            Ok(ScanRecord {
                density: densities[j],
                replicate: r,
                verdict: fit.status.into(),
                status: fit.status,
                iterations: fit.iterations,
                max_abs_beta: fit.beta.max_abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExistenceScan {
        spec: spec.clone(),
        densities: densities.to_vec(),
        replicates: cfg.replicates,
        records,
    })
}
