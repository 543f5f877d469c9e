//! The uniform, layered and general beta models.
//!
//! Every variant is evaluated through a list of [`Block`]s: a block owns one
//! length-n slice of the flattened parameter vector and a set of edge sizes
//! whose edges use that slice. Uniform and general models have a single block;
//! the layered model has one block per size.

pub mod io;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{degrees, for_each_subset, DegreeSequence, Edge, EdgeSpace, Hypergraph};
use crate::numeric::{sigmoid, softplus, sup_norm, CompensatedSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Uniform,
    Layered,
    General,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Uniform => "uniform",
            Variant::Layered => "layered",
            Variant::General => "general",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Variant::Uniform),
            "layered" => Ok(Variant::Layered),
            "general" => Ok(Variant::General),
            _ => Err(Error::InvalidOption(format!("unknown model variant `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    space: EdgeSpace,
    variant: Variant,
}

/// A parameter slice together with the edge sizes that read it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Block {
    pub sizes: Vec<usize>,
    pub offset: usize,
}

impl ModelSpec {
    pub fn new(space: EdgeSpace, variant: Variant) -> Result<Self> {
        if variant == Variant::Uniform && space.sizes().len() != 1 {
            return Err(Error::InvalidSpace(format!(
                "the uniform model needs exactly one edge size, got {:?}",
                space.sizes()
            )));
        }
        Ok(Self { space, variant })
    }

    pub fn uniform(n: usize, k: usize) -> Result<Self> {
        Self::new(EdgeSpace::uniform(n, k)?, Variant::Uniform)
    }

    pub fn layered(n: usize, sizes: Vec<usize>) -> Result<Self> {
        Self::new(EdgeSpace::new(n, sizes)?, Variant::Layered)
    }

    pub fn general(n: usize, sizes: Vec<usize>) -> Result<Self> {
        Self::new(EdgeSpace::new(n, sizes)?, Variant::General)
    }

    pub fn space(&self) -> &EdgeSpace {
        &self.space
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn sizes(&self) -> &[usize] {
        self.space.sizes()
    }

    pub(crate) fn blocks(&self) -> Vec<Block> {
        let n = self.n();
        match self.variant {
            Variant::Uniform | Variant::General => vec![Block {
                sizes: self.sizes().to_vec(),
                offset: 0,
            }],
            Variant::Layered => self
                .sizes()
                .iter()
                .enumerate()
                .map(|(j, &k)| Block {
                    sizes: vec![k],
                    offset: j * n,
                })
                .collect(),
        }
    }

    /// Length of the flattened parameter vector.
    pub fn dim(&self) -> usize {
        match self.variant {
            Variant::Layered => self.n() * self.sizes().len(),
            _ => self.n(),
        }
    }

    pub fn zeros(&self) -> ParamVector {
        self.from_flat(vec![0.0; self.dim()])
            .expect("zero vector has the right dimension")
    }

    /// Rebuilds a parameter vector from its flattened form (layers in ascending size).
    pub fn from_flat(&self, flat: Vec<f64>) -> Result<ParamVector> {
        if flat.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} parameters, got {}",
                self.dim(),
                flat.len()
            )));
        }
        Ok(match self.variant {
            Variant::Layered => ParamVector::Layered(
                self.sizes()
                    .iter()
                    .zip(flat.chunks(self.n()))
                    .map(|(&k, c)| (k, c.to_vec()))
                    .collect(),
            ),
            _ => ParamVector::Shared(flat),
        })
    }

    /// Checks that `beta` has this model's shape and finite entries.
    pub fn check_params(&self, beta: &ParamVector) -> Result<()> {
        let n = self.n();
        match (self.variant, beta) {
            (Variant::Layered, ParamVector::Layered(layers)) => {
                let sizes: Vec<usize> = layers.iter().map(|(k, _)| *k).collect();
                if sizes != self.sizes() {
                    return Err(Error::DimensionMismatch(format!(
                        "parameter layers {sizes:?} do not match sizes {:?}",
                        self.sizes()
                    )));
                }
                if layers.iter().any(|(_, b)| b.len() != n) {
                    return Err(Error::DimensionMismatch(format!(
                        "every layer needs {n} parameters"
                    )));
                }
            }
            (Variant::Layered, ParamVector::Shared(_)) => {
                return Err(Error::DimensionMismatch(
                    "the layered model needs one parameter vector per size".into(),
                ))
            }
            (_, ParamVector::Shared(b)) => {
                if b.len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "expected {n} parameters, got {}",
                        b.len()
                    )));
                }
            }
            (_, ParamVector::Layered(_)) => {
                return Err(Error::DimensionMismatch(format!(
                    "the {} model takes a single parameter vector",
                    self.variant
                )))
            }
        }
        if !beta.flat().iter().all(|b| b.is_finite()) {
            return Err(Error::Domain("parameters must be finite".into()));
        }
        Ok(())
    }

    /// The sufficient statistic of `d` in parameter shape: per-size degrees for
    /// the layered model, total degrees otherwise.
    pub fn statistic(&self, d: &DegreeSequence) -> Result<ParamVector> {
        if d.n() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "degree sequence on {} nodes, model on {}",
                d.n(),
                self.n()
            )));
        }
        if d.has_layers() {
            let sizes = d.sizes();
            if let Some(&k) = sizes.iter().find(|k| !self.space.contains_size(**k)) {
                return Err(Error::EdgeSizeOutsideSpace {
                    size: k,
                    allowed: self.sizes().to_vec(),
                });
            }
        }
        match self.variant {
            Variant::Uniform | Variant::General => Ok(ParamVector::Shared(d.total().to_vec())),
            Variant::Layered => {
                if !d.has_layers() && self.sizes().len() == 1 {
                    return Ok(ParamVector::Layered(vec![(
                        self.sizes()[0],
                        d.total().to_vec(),
                    )]));
                }
                let layers = self
                    .sizes()
                    .iter()
                    .map(|&k| {
                        d.layer(k).map(|v| (k, v.to_vec())).ok_or_else(|| {
                            Error::InvalidDegrees(format!(
                                "the layered model needs size-{k} degrees"
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ParamVector::Layered(layers))
            }
        }
    }

    /// Largest attainable value of each statistic coordinate, flattened.
    pub(crate) fn max_statistic(&self) -> Vec<f64> {
        let n = self.n();
        self.blocks()
            .iter()
            .flat_map(|b| {
                let m: f64 = b.sizes.iter().map(|&k| self.space.max_degree(k)).sum();
                std::iter::repeat_n(m, n)
            })
            .collect()
    }
}

/// Natural parameters: one shared vector (uniform, general) or one vector per size (layered).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamVector {
    Shared(Vec<f64>),
    /// `(size, β^(size))`, in ascending size.
    Layered(Vec<(usize, Vec<f64>)>),
}

impl ParamVector {
    /// All entries, layers concatenated in ascending size.
    pub fn flat(&self) -> Vec<f64> {
        match self {
            ParamVector::Shared(b) => b.clone(),
            ParamVector::Layered(layers) => {
                layers.iter().flat_map(|(_, b)| b.iter().copied()).collect()
            }
        }
    }

    /// The vector used by edges of size `k`.
    pub fn for_size(&self, k: usize) -> Option<&[f64]> {
        match self {
            ParamVector::Shared(b) => Some(b),
            ParamVector::Layered(layers) => layers
                .iter()
                .find(|(s, _)| *s == k)
                .map(|(_, b)| b.as_slice()),
        }
    }

    pub fn max_abs(&self) -> f64 {
        sup_norm(&self.flat())
    }

    pub fn sup_distance(&self, other: &ParamVector) -> f64 {
        crate::numeric::sup_distance(&self.flat(), &other.flat())
    }
}

/// `Σ_{i∈e} β_i`.
#[inline]
pub(crate) fn edge_logit(beta: &[f64], nodes: &[usize]) -> f64 {
    nodes.iter().map(|&i| beta[i]).sum()
}

/// Adds `Σ_{e∋i, |e|∈sizes} sigmoid(β̃_e)` to `acc[i]` in one pass over the edges.
pub(crate) fn accumulate_expected(
    n: usize,
    sizes: &[usize],
    beta: &[f64],
    acc: &mut [CompensatedSum],
) {
    for &k in sizes {
        for_each_subset(n, k, |e| {
            let p = sigmoid(edge_logit(beta, e));
            for &i in e {
                acc[i].add(p);
            }
        });
    }
}

/// Expected degrees in flattened parameter order.
pub(crate) fn expected_flat(spec: &ModelSpec, flat: &[f64]) -> Vec<f64> {
    let n = spec.n();
    let mut out = vec![0.0; flat.len()];
    for block in spec.blocks() {
        let beta = &flat[block.offset..block.offset + n];
        let mut acc = vec![CompensatedSum::default(); n];
        accumulate_expected(n, &block.sizes, beta, &mut acc);
        for (o, a) in out[block.offset..block.offset + n].iter_mut().zip(&acc) {
            *o = a.value();
        }
    }
    out
}

fn psi_flat(spec: &ModelSpec, flat: &[f64]) -> f64 {
    let n = spec.n();
    let mut total = CompensatedSum::default();
    for block in spec.blocks() {
        let beta = &flat[block.offset..block.offset + n];
        for &k in &block.sizes {
            for_each_subset(n, k, |e| total.add(softplus(edge_logit(beta, e))));
        }
    }
    total.value()
}

/// `p_e = sigmoid(Σ_{i∈e} β_i)`, using the size-|e| layer for the layered model.
pub fn edge_probability(spec: &ModelSpec, beta: &ParamVector, e: &Edge) -> Result<f64> {
    spec.check_params(beta)?;
    if !spec.space().contains(e) {
        return Err(Error::EdgeOutsideSpace {
            edge: e.nodes().iter().map(|v| v + 1).collect(),
        });
    }
    let b = beta
        .for_size(e.len())
        .expect("size checked against the space");
    Ok(sigmoid(edge_logit(b, e.nodes())))
}

/// Log normalizing constant `ψ(β) = Σ_e log(1 + exp(β̃_e))`.
pub fn psi(spec: &ModelSpec, beta: &ParamVector) -> Result<f64> {
    spec.check_params(beta)?;
    Ok(psi_flat(spec, &beta.flat()))
}

/// Gradient of ψ, shaped like `beta`: the expected sufficient statistic.
pub fn grad_psi(spec: &ModelSpec, beta: &ParamVector) -> Result<ParamVector> {
    spec.check_params(beta)?;
    spec.from_flat(expected_flat(spec, &beta.flat()))
}

/// Expected degrees under the model, split by size, with totals.
pub fn expected_degrees(spec: &ModelSpec, beta: &ParamVector) -> Result<DegreeSequence> {
    spec.check_params(beta)?;
    let n = spec.n();
    let mut layers = Vec::new();
    for &k in spec.sizes() {
        let b = beta.for_size(k).expect("checked");
        let mut acc = vec![CompensatedSum::default(); n];
        accumulate_expected(n, &[k], b, &mut acc);
        layers.push((k, acc.iter().map(|a| a.value()).collect()));
    }
    DegreeSequence::from_layers(n, layers)
}

/// Exact log-likelihood of the observed hypergraph, `Σ_i d_i β_i − ψ(β)`.
pub fn log_likelihood(spec: &ModelSpec, beta: &ParamVector, h: &Hypergraph) -> Result<f64> {
    if let Some(e) = h.edges().iter().find(|e| !spec.space().contains(e)) {
        return Err(Error::EdgeOutsideSpace {
            edge: e.nodes().iter().map(|v| v + 1).collect(),
        });
    }
    let d = degrees(h, spec.space())?;
    log_likelihood_from_degrees(spec, beta, &d)
}

/// `⟨β, d⟩ − ψ(β)` for a (possibly averaged) degree sequence.
pub fn log_likelihood_from_degrees(
    spec: &ModelSpec,
    beta: &ParamVector,
    d: &DegreeSequence,
) -> Result<f64> {
    spec.check_params(beta)?;
    let stat = spec.statistic(d)?.flat();
    let flat = beta.flat();
    let mut dot = CompensatedSum::default();
    for (b, s) in flat.iter().zip(&stat) {
        dot.add(b * s);
    }
    Ok(dot.value() - psi_flat(spec, &flat))
}

/// Lazily yields `(e, p_e)` over the whole edge space.
pub fn mean_value_map<'a>(
    spec: &'a ModelSpec,
    beta: &'a ParamVector,
) -> Result<impl Iterator<Item = (Edge, f64)> + 'a> {
    spec.check_params(beta)?;
    Ok(spec.space().edges().map(move |e| {
        let b = beta.for_size(e.len()).expect("checked");
        let p = sigmoid(edge_logit(b, e.nodes()));
        (e, p)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::logit;
    use proptest::prelude::*;

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn spec_validation() {
        assert!(ModelSpec::new(EdgeSpace::new(5, vec![2, 3]).unwrap(), Variant::Uniform).is_err());
        let s = ModelSpec::layered(5, vec![3, 2]).unwrap();
        assert_eq!(s.sizes(), &[2, 3]);
        assert_eq!(s.dim(), 10);
        assert!(s.check_params(&ParamVector::Shared(vec![0.0; 5])).is_err());
        assert!(s
            .check_params(&ParamVector::Layered(vec![
                (2, vec![0.0; 5]),
                (3, vec![0.0; 4])
            ]))
            .is_err());
        assert!(s.check_params(&s.zeros()).is_ok());
        let g = ModelSpec::general(5, vec![2, 3]).unwrap();
        assert!(g
            .check_params(&ParamVector::Shared(vec![0.0, 0.0, f64::NAN, 0.0, 0.0]))
            .is_err());
    }

    #[test]
    fn probabilities() {
        let s = ModelSpec::uniform(5, 3).unwrap();
        let e = Edge::new([0, 1, 2]).unwrap();
        assert_eq!(edge_probability(&s, &s.zeros(), &e).unwrap(), 0.5);
        let b = ParamVector::Shared(vec![1.0; 5]);
        let p = edge_probability(&s, &b, &e).unwrap();
        assert!((p - 0.952_574_126_822_433_4).abs() < 1e-15);
        let b = ParamVector::Shared(vec![700.0 / 3.0; 5]);
        assert!(edge_probability(&s, &b, &e).unwrap() <= 1.0);
        let b = ParamVector::Shared(vec![10.0 / 3.0; 5]);
        assert!(edge_probability(&s, &b, &e).unwrap() > 0.9999);
        assert!(matches!(
            edge_probability(&s, &s.zeros(), &Edge::new([0, 1]).unwrap()),
            Err(Error::EdgeOutsideSpace { .. })
        ));
    }

    #[test]
    fn psi_at_zero() {
        let s = ModelSpec::uniform(3, 2).unwrap();
        assert!((psi(&s, &s.zeros()).unwrap() - 3.0 * LN2).abs() < 1e-14);
        let g = ModelSpec::general(4, vec![2, 3]).unwrap();
        assert!((psi(&g, &g.zeros()).unwrap() - 10.0 * LN2).abs() < 1e-14);
    }

    #[test]
    fn psi_direct_summation() {
        let s = ModelSpec::uniform(4, 2).unwrap();
        let beta = [1.0, 0.0, -1.0, 0.0];
        let mut expected = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                expected += (1.0 + f64::exp(beta[i] + beta[j])).ln();
            }
        }
        let got = psi(&s, &ParamVector::Shared(beta.to_vec())).unwrap();
        assert!((got - expected).abs() < 1e-13);
    }

    #[test]
    fn gradient_at_zero() {
        let s = ModelSpec::uniform(7, 3).unwrap();
        let g = grad_psi(&s, &s.zeros()).unwrap().flat();
        assert!(g.iter().all(|&x| (x - 7.5).abs() < 1e-13));

        let l = ModelSpec::layered(10, vec![2, 3]).unwrap();
        match grad_psi(&l, &l.zeros()).unwrap() {
            ParamVector::Layered(layers) => {
                assert!(layers[0].1.iter().all(|&x| (x - 4.5).abs() < 1e-13));
                assert!(layers[1].1.iter().all(|&x| (x - 18.0).abs() < 1e-13));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn likelihood_of_empty_and_at_zero() {
        let s = ModelSpec::uniform(5, 3).unwrap();
        let b = ParamVector::Shared(vec![0.3, -0.2, 0.1, 0.0, 1.0]);
        let ll = log_likelihood(&s, &b, &Hypergraph::empty(5)).unwrap();
        assert!((ll + psi(&s, &b).unwrap()).abs() < 1e-13);

        let h = Hypergraph::new(5, vec![Edge::new([0, 1, 2]).unwrap()]).unwrap();
        let ll0 = log_likelihood(&s, &s.zeros(), &h).unwrap();
        assert!((ll0 + 10.0 * LN2).abs() < 1e-13);
    }

    #[test]
    fn likelihood_two_forms_path() {
        let s = ModelSpec::uniform(4, 2).unwrap();
        let beta = vec![1.0, 0.0, -1.0, 0.0];
        let b = ParamVector::Shared(beta.clone());
        let h = Hypergraph::new(
            4,
            vec![Edge::new([0, 1]).unwrap(), Edge::new([1, 2]).unwrap()],
        )
        .unwrap();
        let mut edgewise = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                let p = 1.0 / (1.0 + f64::exp(-(beta[i] + beta[j])));
                let x = h.contains(&Edge::new([i, j]).unwrap());
                edgewise += if x { p.ln() } else { (1.0 - p).ln() };
            }
        }
        assert!((log_likelihood(&s, &b, &h).unwrap() - edgewise).abs() < 1e-10);
    }

    #[test]
    fn mean_value_map_handshake() {
        let s = ModelSpec::uniform(6, 3).unwrap();
        let b = ParamVector::Shared(vec![0.5, -0.3, 0.2, 1.0, -1.0, 0.0]);
        let total: f64 = mean_value_map(&s, &b).unwrap().map(|(_, p)| p).sum();
        let grad: f64 = grad_psi(&s, &b).unwrap().flat().iter().sum();
        assert!((total - grad / 3.0).abs() < 1e-12);
        assert_eq!(mean_value_map(&s, &b).unwrap().count(), 20);
    }

    #[test]
    fn statistic_shapes() {
        let d = DegreeSequence::from_layers(
            4,
            vec![(2, vec![1.0, 0.0, 1.0, 2.0]), (3, vec![1.0, 1.0, 1.0, 0.0])],
        )
        .unwrap();
        let g = ModelSpec::general(4, vec![2, 3]).unwrap();
        assert_eq!(
            g.statistic(&d).unwrap(),
            ParamVector::Shared(vec![2.0, 1.0, 2.0, 2.0])
        );
        let l = ModelSpec::layered(4, vec![2, 3]).unwrap();
        assert_eq!(
            l.statistic(&d).unwrap().flat(),
            vec![1.0, 0.0, 1.0, 2.0, 1.0, 1.0, 1.0, 0.0]
        );
        let t = DegreeSequence::from_totals(vec![1.0; 4]).unwrap();
        assert!(l.statistic(&t).is_err());
        assert!(ModelSpec::uniform(4, 2).unwrap().statistic(&d).is_err());
    }

    fn arb_spec() -> impl Strategy<Value = ModelSpec> {
        (4usize..9, 0usize..3, 0usize..3).prop_map(|(n, v, shape)| {
            let sizes = match shape {
                0 => vec![2],
                1 => vec![3],
                _ => vec![2, 3],
            };
            let variant = match (v, sizes.len()) {
                (0, 1) => Variant::Uniform,
                (1, _) | (0, _) => Variant::Layered,
                _ => Variant::General,
            };
            ModelSpec::new(EdgeSpace::new(n, sizes).unwrap(), variant).unwrap()
        })
    }

    fn arb_params() -> impl Strategy<Value = (ModelSpec, Vec<f64>, Vec<f64>)> {
        arb_spec().prop_flat_map(|s| {
            let d = s.dim();
            (
                Just(s),
                prop::collection::vec(-2.0f64..2.0, d),
                prop::collection::vec(-2.0f64..2.0, d),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn psi_is_convex((s, a, b) in arb_params(), t in 0.01f64..0.99) {
            let mix: Vec<f64> = a.iter().zip(&b).map(|(x, y)| t * x + (1.0 - t) * y).collect();
            let lhs = psi(&s, &s.from_flat(mix).unwrap()).unwrap();
            let rhs = t * psi(&s, &s.from_flat(a).unwrap()).unwrap()
                + (1.0 - t) * psi(&s, &s.from_flat(b).unwrap()).unwrap();
            prop_assert!(lhs <= rhs + 1e-9);
        }

        #[test]
        fn gradient_matches_finite_differences((s, a, _) in arb_params()) {
            let h = 1e-5;
            let grad = grad_psi(&s, &s.from_flat(a.clone()).unwrap()).unwrap().flat();
            for j in 0..a.len() {
                let mut up = a.clone();
                let mut dn = a.clone();
                up[j] += h;
                dn[j] -= h;
                let fd = (psi(&s, &s.from_flat(up).unwrap()).unwrap()
                    - psi(&s, &s.from_flat(dn).unwrap()).unwrap()) / (2.0 * h);
                prop_assert!((fd - grad[j]).abs() <= 1e-6 * grad[j].abs().max(1.0));
            }
        }

        #[test]
        fn translation_shifts_logits((s, a, _) in arb_params(), c in -1.0f64..1.0) {
            let shifted: Vec<f64> = a.iter().map(|x| x + c).collect();
            let b0 = s.from_flat(a).unwrap();
            let b1 = s.from_flat(shifted).unwrap();
            for e in s.space().edges().take(40) {
                let p0 = edge_probability(&s, &b0, &e).unwrap();
                let p1 = edge_probability(&s, &b1, &e).unwrap();
                let diff = logit(p1) - logit(p0);
                prop_assert!((diff - e.len() as f64 * c).abs() < 1e-9);
            }
        }

        #[test]
        fn likelihood_forms_agree((s, a, _) in arb_params(), mask in prop::collection::vec(any::<bool>(), 100)) {
            let b = s.from_flat(a).unwrap();
            let edges = s.space().edges().zip(mask.iter().cycle()).filter(|(_, m)| **m).map(|(e, _)| e);
            let h = Hypergraph::new(s.n(), edges).unwrap();
            let mut edgewise = CompensatedSum::default();
            for (e, p) in mean_value_map(&s, &b).unwrap() {
                edgewise.add(if h.contains(&e) { p.ln() } else { (1.0 - p).ln() });
            }
            let ll = log_likelihood(&s, &b, &h).unwrap();
            prop_assert!((ll - edgewise.value()).abs() < 1e-10 * ll.abs().max(1.0));
        }

        #[test]
        fn general_depends_only_on_logit(n in 5usize..8, a in prop::collection::vec(-2.0f64..2.0, 8)) {
            // Edge {0,1} and edge {0,1,2} share a logit when β_2 = 0.
            let s = ModelSpec::general(n, vec![2, 3]).unwrap();
            let mut beta = a[..n].to_vec();
            beta[2] = 0.0;
            let b = ParamVector::Shared(beta);
            let p2 = edge_probability(&s, &b, &Edge::new([0, 1]).unwrap()).unwrap();
            let p3 = edge_probability(&s, &b, &Edge::new([0, 1, 2]).unwrap()).unwrap();
            prop_assert_eq!(p2, p3);
        }
    }
}
