//! Seeded sampling from the beta models and from fixed-density uniform hypergraphs.
//!
//! Replicate `r` draws from a ChaCha8 stream seeded with `seed ^ splitmix64(r)`,
//! so replicates are independent of the number of threads and of each other.
//! Replicates run in parallel and are returned in index order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{degrees, DegreeSequence, Edge, EdgeSpace, Hypergraph, SubsetCursor};
use crate::model::{edge_logit, ModelSpec, ParamVector};
use crate::numeric::sigmoid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub seed: u64,
    pub replicates: usize,
}

impl SampleConfig {
    pub fn new(seed: u64, replicates: usize) -> Self {
        Self { seed, replicates }
    }

    /// The generator for replicate `r`.
    pub fn rng(&self, r: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ splitmix64(r as u64))
    }

    fn check(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidOption("replicates must be positive".into()));
        }
        Ok(())
    }
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            replicates: 1,
        }
    }
}

/// The SplitMix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Visits every edge of the model and calls `keep` on those drawn present.
fn draw(
    spec: &ModelSpec,
    beta: &ParamVector,
    rng: &mut ChaCha8Rng,
    mut keep: impl FnMut(&[usize]),
) {
    let n = spec.n();
    for &k in spec.sizes() {
        let b = beta.for_size(k).expect("parameters checked");
        let mut cursor = SubsetCursor::new(n, k);
        while let Some(e) = cursor.advance() {
            let p = sigmoid(edge_logit(b, e));
            if rng.random::<f64>() < p {
                keep(e);
            }
        }
    }
}

/// Draws `cfg.replicates` independent hypergraphs from the model.
pub fn sample(spec: &ModelSpec, beta: &ParamVector, cfg: &SampleConfig) -> Result<Vec<Hypergraph>> {
    spec.check_params(beta)?;
    cfg.check()?;
    Ok((0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = cfg.rng(r);
            let mut edges = Vec::new();
            draw(spec, beta, &mut rng, |e| {
                edges.push(Edge::from_sorted_unchecked(e))
            });
            Hypergraph::from_canonical_unchecked(spec.n(), edges)
        })
        .collect())
}

/// Mean degree sequence of `cfg.replicates` model draws, without storing the hypergraphs.
///
/// Equals `mean_degrees(&sample(spec, beta, cfg)?, spec.space())`.
pub fn sample_mean_degrees(
    spec: &ModelSpec,
    beta: &ParamVector,
    cfg: &SampleConfig,
) -> Result<DegreeSequence> {
    spec.check_params(beta)?;
    cfg.check()?;
    let n = spec.n();
    let sizes = spec.sizes();
    let counts: Vec<Vec<f64>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = cfg.rng(r);
            let mut c = vec![0.0; n * sizes.len()];
            for (j, &k) in sizes.iter().enumerate() {
                let b = beta.for_size(k).expect("checked");
                let layer = &mut c[j * n..(j + 1) * n];
                let mut cursor = SubsetCursor::new(n, k);
                while let Some(e) = cursor.advance() {
                    if rng.random::<f64>() < sigmoid(edge_logit(b, e)) {
                        e.iter().for_each(|&i| layer[i] += 1.0);
                    }
                }
            }
            c
        })
        .collect();
    let mut sum = vec![0.0; n * sizes.len()];
    for c in &counts {
        sum.iter_mut().zip(c).for_each(|(s, x)| *s += x);
    }
    let r = cfg.replicates as f64;
    DegreeSequence::from_layers(
        n,
        sizes
            .iter()
            .zip(sum.chunks(n))
            .map(|(&k, c)| (k, c.iter().map(|x| x / r).collect()))
            .collect(),
    )
}

/// Coordinatewise mean of the degree sequences of `samples`.
pub fn mean_degrees(samples: &[Hypergraph], space: &EdgeSpace) -> Result<DegreeSequence> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let seqs = samples
        .iter()
        .map(|h| degrees(h, space))
        .collect::<Result<Vec<_>>>()?;
    DegreeSequence::mean(&seqs)
}

/// Number of edges drawn for `density`: `floor(density·total + 1/2)`.
pub fn edges_for_density(density: f64, total: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidDensity(density));
    }
    Ok(((density * total as f64 + 0.5).floor() as usize).min(total))
}

/// Draws hypergraphs uniformly among those with exactly `round(density·|E|)` edges.
///
/// Uses selection sampling over the edge stream, so memory is proportional to
/// the number of selected edges.
pub fn sample_fixed_density(
    space: &EdgeSpace,
    density: f64,
    cfg: &SampleConfig,
) -> Result<Vec<Hypergraph>> {
    cfg.check()?;
    let total = space.edge_count();
    let m = edges_for_density(density, total)?;
    Ok((0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = cfg.rng(r);
            let mut edges = Vec::with_capacity(m);
            let mut seen = 0usize;
            for &k in space.sizes() {
                let mut cursor = SubsetCursor::new(space.n(), k);
                while let Some(e) = cursor.advance() {
                    if edges.len() == m {
                        break;
                    }
                    let need = (m - edges.len()) as f64;
                    let left = (total - seen) as f64;
                    if left * rng.random::<f64>() < need {
                        edges.push(Edge::from_sorted_unchecked(e));
                    }
                    seen += 1;
                }
            }
            Hypergraph::from_canonical_unchecked(space.n(), edges)
        })
        .collect())
}
