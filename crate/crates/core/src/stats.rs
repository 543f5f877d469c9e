//! Chi-square tail and quantile, and the layered-vs-general likelihood ratio test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixedpoint::{fit_fixed_point, FitStatus, FixedPointOptions};
use crate::hypergraph::{DegreeSequence, EdgeSpace, Hypergraph};
use crate::model::{log_likelihood_from_degrees, ModelSpec, Variant};
use crate::sampler::mean_degrees;

const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1−x) = π / sin(πx).
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + 7.5;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Regularized upper incomplete gamma `Q(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !(x >= 0.0) {
        return Err(Error::Domain(format!("gamma_q({a}, {x})")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let log_prefix = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        // P(a, x) = x^a e^{-x} / Γ(a+1) Σ x^n / ((a+1)⋯(a+n))
        let mut term = 1.0 / a;
        let mut sum = term;
        for n in 1..1000 {
            term *= x / (a + n as f64);
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        Ok((1.0 - sum * log_prefix.exp()).max(0.0))
    } else {
        // Modified Lentz on the continued fraction for Q.
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..1000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        Ok((log_prefix.exp() * h).min(1.0))
    }
}

/// Survival function `P(χ²_df > x)`.
pub fn chi2_sf(x: f64, df: usize) -> Result<f64> {
    if df == 0 || !(x >= 0.0) {
        return Err(Error::Domain(format!("chi2_sf({x}, {df})")));
    }
    gamma_q(df as f64 / 2.0, x / 2.0)
}

/// Upper quantile: the `x` with `chi2_sf(x, df) = p`.
pub fn chi2_quantile(p: f64, df: usize) -> Result<f64> {
    if df == 0 || !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("chi2_quantile({p}, {df})")));
    }
    let mut lo = 0.0;
    let mut hi = df as f64 + 10.0;
    while chi2_sf(hi, df)? > p {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if chi2_sf(mid, df)? > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Rejection decisions at the three reported levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejections {
    #[serde(rename = "0.05")]
    pub at_05: bool,
    #[serde(rename = "0.01")]
    pub at_01: bool,
    #[serde(rename = "0.005")]
    pub at_005: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrtResult {
    pub lambda: f64,
    pub df: usize,
    pub p_value: f64,
    pub reject: Rejections,
    /// Maximized mean log-likelihood per observation, layered model.
    pub loglik_layered: f64,
    /// Maximized mean log-likelihood per observation, general model.
    pub loglik_general: f64,
    /// Number of observed hypergraphs behind the average degrees.
    pub observations: usize,
}

/// Likelihood ratio test of the general model (null) inside the layered model.
///
/// `d` holds per-size degrees averaged over `observations` independent
/// hypergraphs; `λ = 2·observations·(ℓ̄_layered − ℓ̄_general)` with
/// `ℓ̄ = ⟨β̂, d⟩ − ψ(β̂)`, referred to χ² with `(|K|−1)·n` degrees of freedom.
pub fn lrt_layered_vs_general(
    space: &EdgeSpace,
    d: &DegreeSequence,
    observations: usize,
    opts: &FixedPointOptions,
) -> Result<LrtResult> {
    if observations == 0 {
        return Err(Error::InvalidOption("observations must be positive".into()));
    }
    let df = (space.sizes().len() - 1) * space.n();
    if df == 0 {
        return Err(Error::InvalidSpace(
            "the test needs at least two edge sizes".into(),
        ));
    }
    let layered = ModelSpec::new(space.clone(), Variant::Layered)?;
    let general = ModelSpec::new(space.clone(), Variant::General)?;
    let fit = |spec: &ModelSpec, name: &str| -> Result<f64> {
        let f = fit_fixed_point(spec, d, opts)?;
        if f.status != FitStatus::Converged {
            return Err(Error::FitFailed {
                model: name.into(),
                status: f.status,
            });
        }
        log_likelihood_from_degrees(spec, &f.beta, d)
    };
    let loglik_layered = fit(&layered, "layered")?;
    let loglik_general = fit(&general, "general")?;
    let lambda = 2.0 * observations as f64 * (loglik_layered - loglik_general);
    let p_value = chi2_sf(lambda.max(0.0), df)?;
    Ok(LrtResult {
        lambda,
        df,
        p_value,
        reject: Rejections {
            at_05: p_value < 0.05,
            at_01: p_value < 0.01,
            at_005: p_value < 0.005,
        },
        loglik_layered,
        loglik_general,
        observations,
    })
}

/// [`lrt_layered_vs_general`] on observed hypergraphs.
pub fn lrt_from_hypergraphs(
    space: &EdgeSpace,
    hs: &[Hypergraph],
    opts: &FixedPointOptions,
) -> Result<LrtResult> {
    let d = mean_degrees(hs, space)?;
    lrt_layered_vs_general(space, &d, hs.len(), opts)
}
