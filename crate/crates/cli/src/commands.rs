use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use hyperbeta::existence::BoundaryCertificate;
use hyperbeta::hypergraph::io::{read_degrees, read_hypergraphs, write_degrees, write_hypergraphs};
use hyperbeta::ips::LogitFit;
use hyperbeta::model::io::read_params;
use hyperbeta::model::{expected_degrees, log_likelihood_from_degrees, psi};
use hyperbeta::numeric::round_sig;
use hyperbeta::sampler::{mean_degrees, sample, sample_fixed_density, sample_mean_degrees};
use hyperbeta::stats::{lrt_from_hypergraphs, Rejections};
use hyperbeta::{
    fit_fixed_point, ips_fit, ips_fit_general, ips_fit_layered, logits_to_beta,
    lrt_layered_vs_general, scan_existence, screen_boundary, DegreeSequence, EdgeSpace, FitStatus,
    FixedPointOptions, Hypergraph, IpsFit, IpsOptions, ModelSpec, ParamVector, SampleConfig,
    Variant, Verdict,
};
use serde::Serialize;

use crate::config::{
    parse_damping, FitConfig, Format, LrtConfig, Method, RunConfig, ScanConfig, SimulateConfig,
};
use crate::CliResult;

/// Text written by a command and the process exit code.
pub struct Outcome {
    pub files: Vec<(Option<String>, String)>,
    pub code: u8,
}

impl Outcome {
    fn single(text: String, code: u8) -> Self {
        Self {
            files: vec![(None, text)],
            code,
        }
    }
}

pub enum Data {
    Edges(Vec<Hypergraph>),
    Degrees(DegreeSequence),
}

impl Data {
    /// An edge list (possibly `---`-separated blocks) or a degree file, told apart
    /// by the first line after the header: degree lines carry a `key:` prefix.
    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let is_degrees = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .nth(1)
            .is_some_and(|l| l.contains(':'));
        let data = if is_degrees {
            Data::Degrees(read_degrees(&text)?)
        } else {
            Data::Edges(read_hypergraphs(&text)?)
        };
        Ok(data)
    }

    pub fn n(&self) -> usize {
        match self {
            Data::Edges(hs) => hs[0].n(),
            Data::Degrees(d) => d.n(),
        }
    }

    /// Edge sizes present in the data, if it says.
    pub fn sizes(&self) -> Vec<usize> {
        match self {
            Data::Edges(hs) => {
                let mut s: Vec<usize> = hs
                    .iter()
                    .flat_map(|h| h.edges().iter().map(|e| e.len()))
                    .collect();
                s.sort_unstable();
                s.dedup();
                s
            }
            Data::Degrees(d) => d.sizes(),
        }
    }

    pub fn observations(&self) -> Option<usize> {
        match self {
            Data::Edges(hs) => Some(hs.len()),
            Data::Degrees(_) => None,
        }
    }

    pub fn mean_degrees(&self, space: &EdgeSpace) -> CliResult<DegreeSequence> {
        Ok(match self {
            Data::Edges(hs) => mean_degrees(hs, space)?,
            Data::Degrees(d) => d.clone(),
        })
    }
}

pub fn run(config: &RunConfig) -> CliResult<Outcome> {
    match config {
        RunConfig::Fit(c) => fit(config, c),
        RunConfig::Simulate(c) => simulate(config, c),
        RunConfig::Lrt(c) => lrt(config, c),
        RunConfig::ScanExistence(c) => scan(config, c),
    }
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| round_sig(x)).collect()
}

/// Parameters as a JSON array (shared) or an object keyed by edge size (layered).
#[derive(Serialize)]
#[serde(untagged)]
enum ParamsOut {
    Shared(Vec<f64>),
    Layered(BTreeMap<usize, Vec<f64>>),
}

impl From<&ParamVector> for ParamsOut {
    fn from(p: &ParamVector) -> Self {
        match p {
            ParamVector::Shared(v) => ParamsOut::Shared(rounded(v)),
            ParamVector::Layered(ls) => {
                ParamsOut::Layered(ls.iter().map(|(k, v)| (*k, rounded(v))).collect())
            }
        }
    }
}

#[derive(Serialize)]
struct DegreesOut {
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    layers: BTreeMap<usize, Vec<f64>>,
    total: Vec<f64>,
}

impl From<&DegreeSequence> for DegreesOut {
    fn from(d: &DegreeSequence) -> Self {
        Self {
            layers: d
                .layers()
                .iter()
                .map(|l| (l.size, rounded(&l.values)))
                .collect(),
            total: rounded(d.total()),
        }
    }
}

#[derive(Serialize)]
struct FitOut<'a> {
    config: &'a RunConfig,
    status: FitStatus,
    verdict: Verdict,
    iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<BoundaryCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    final_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    margin_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    logit_inconsistency: Option<f64>,
    beta: Option<ParamsOut>,
    moment_residual: Option<f64>,
    psi: Option<f64>,
    log_likelihood: Option<f64>,
    expected_degrees: Option<DegreesOut>,
    observed_degrees: DegreesOut,
}

fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Exists => 0,
        Verdict::NotExists => 2,
        Verdict::Undetermined => 3,
    }
}

/// Resolves `n` and the edge sizes from the configuration and the data.
pub fn resolve_space(
    n: Option<usize>,
    sizes: &[usize],
    data: &Data,
) -> CliResult<(usize, Vec<usize>)> {
    let n_data = data.n();
    if let Some(n) = n.filter(|&n| n != n_data) {
        return Err(format!("--n {n} disagrees with the input (n={n_data})").into());
    }
    let sizes = if sizes.is_empty() {
        data.sizes()
    } else {
        sizes.to_vec()
    };
    if sizes.is_empty() {
        return Err("cannot infer edge sizes from the input; pass --sizes".into());
    }
    Ok((n_data, sizes))
}

fn fit(config: &RunConfig, c: &FitConfig) -> CliResult<Outcome> {
    let data = Data::read(&c.input)?;
    if data.n() != c.n {
        return Err(format!("config n={} disagrees with the input (n={})", c.n, data.n()).into());
    }
    let spec = ModelSpec::new(EdgeSpace::new(c.n, c.sizes.clone())?, c.model)?;
    let d = data.mean_degrees(spec.space())?;
    let certificate = match spec.variant() {
        Variant::General => screen_boundary(
            spec.space(),
            &DegreeSequence::from_totals(d.total().to_vec())?,
        ),
        _ => screen_boundary(spec.space(), &d),
    };
    let mut out = FitOut {
        config,
        status: FitStatus::BoundaryDegrees,
        verdict: Verdict::NotExists,
        iterations: 0,
        certificate,
        final_step: None,
        omega: None,
        margin_residual: None,
        logit_inconsistency: None,
        beta: None,
        moment_residual: None,
        psi: None,
        log_likelihood: None,
        expected_degrees: None,
        observed_degrees: (&d).into(),
    };
    let mut csv = String::new();
    let beta = match c.method {
        Method::Fixedpoint => {
            let opts = FixedPointOptions {
                tol: c.tol,
                max_iter: c.max_iter,
                damping: parse_damping(c.damping.as_deref().unwrap_or("fallback"))?,
                trace: c.format == Format::Csv,
                ..Default::default()
            };
            let fit = fit_fixed_point(&spec, &d, &opts)?;
            out.status = fit.status;
            out.verdict = fit.status.into();
            out.iterations = fit.iterations;
            out.final_step = Some(round_sig(fit.final_step));
            out.omega = Some(round_sig(fit.omega));
            csv.push_str("iteration,step,max_abs_beta,residual\n");
            for row in fit.trace.iter().flatten() {
                let _ = writeln!(
                    csv,
                    "{},{},{},{}",
                    row.iteration,
                    round_sig(row.step),
                    round_sig(row.max_abs_beta),
                    round_sig(row.residual)
                );
            }
            (fit.status != FitStatus::BoundaryDegrees).then_some(fit.beta)
        }
        Method::Ips => {
            let opts = IpsOptions {
                tol: c.tol,
                max_iter: c.max_iter,
            };
            if out.certificate.is_some() {
                None
            } else {
                let fits = ips_fits(&spec, &d, &opts)?;
                write_ips_csv(&mut csv, spec.space().max_size(), &fits);
                let exhausted = fits.iter().any(|(_, f)| f.status != FitStatus::Converged);
                let boundary = fits.iter().any(|(_, f)| f.boundary);
                out.status = if exhausted {
                    FitStatus::MaxIterExceeded
                } else {
                    FitStatus::Converged
                };
                out.iterations = fits.iter().map(|(_, f)| f.iterations).max().unwrap_or(0);
                out.margin_residual = Some(round_sig(
                    fits.iter()
                        .map(|(_, f)| f.margin_residual)
                        .fold(0.0, f64::max),
                ));
                out.verdict = match (exhausted, boundary) {
                    (_, true) => Verdict::NotExists,
                    (true, false) => Verdict::Undetermined,
                    (false, false) => Verdict::Exists,
                };
                if boundary {
                    None
                } else {
                    let logits: Vec<(usize, LogitFit)> = fits
                        .iter()
                        .map(|(k, f)| logits_to_beta(&f.table).map(|l| (*k, l)))
                        .collect::<hyperbeta::Result<_>>()?;
                    out.logit_inconsistency = Some(round_sig(
                        logits
                            .iter()
                            .map(|(_, l)| l.inconsistency)
                            .fold(0.0, f64::max),
                    ));
                    Some(match spec.variant() {
                        Variant::Layered => ParamVector::Layered(
                            logits.into_iter().map(|(k, l)| (k, l.beta)).collect(),
                        ),
                        _ => ParamVector::Shared(
                            logits.into_iter().next().expect("one table").1.beta,
                        ),
                    })
                }
            }
        }
    };
    if let Some(beta) = &beta {
        let expected = expected_degrees(&spec, beta)?;
        let grad = spec.statistic(&expected)?.flat();
        let target = spec.statistic(&d)?.flat();
        let residual = grad
            .iter()
            .zip(&target)
            .map(|(g, t)| (g - t).abs())
            .fold(0.0, f64::max);
        out.moment_residual = Some(round_sig(residual));
        out.psi = Some(round_sig(psi(&spec, beta)?));
        out.log_likelihood = Some(round_sig(log_likelihood_from_degrees(&spec, beta, &d)?));
        out.expected_degrees = Some((&expected).into());
        out.beta = Some(beta.into());
    }
    let code = exit_code(out.verdict);
    let text = match c.format {
        Format::Csv => format!("{}{csv}", config.comment_line()),
        _ => json(&out)?,
    };
    Ok(Outcome::single(text, code))
}

/// One table per layer for the layered model, a single table otherwise.
fn ips_fits(
    spec: &ModelSpec,
    d: &DegreeSequence,
    opts: &IpsOptions,
) -> CliResult<Vec<(usize, IpsFit)>> {
    let space = spec.space();
    let key = space.max_size();
    Ok(match spec.variant() {
        Variant::Layered => ips_fit_layered(space, d, opts)?,
        Variant::Uniform => vec![(key, ips_fit(space, d.total(), opts)?)],
        Variant::General => vec![(key, ips_fit_general(space, d.total(), opts)?)],
    })
}

/// `i1,…,ir,p` rows with 1-based labels; shorter edges leave trailing node cells empty.
fn write_ips_csv(out: &mut String, r: usize, fits: &[(usize, IpsFit)]) {
    for i in 1..=r {
        let _ = write!(out, "i{i},");
    }
    out.push_str("p\n");
    for (_, f) in fits {
        for (e, p) in f.table.iter() {
            for j in 0..r {
                if let Some(v) = e.nodes().get(j) {
                    let _ = write!(out, "{}", v + 1);
                }
                out.push(',');
            }
            let _ = writeln!(out, "{}", round_sig(p));
        }
    }
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn simulate(config: &RunConfig, c: &SimulateConfig) -> CliResult<Outcome> {
    let spec = ModelSpec::new(EdgeSpace::new(c.n, c.sizes.clone())?, c.model)?;
    let cfg = SampleConfig::new(c.seed, c.replicates);
    let beta = match (&c.beta, c.density) {
        (Some(_), Some(_)) => return Err("--beta and --density are mutually exclusive".into()),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let (n, beta) = read_params(&text)?;
            if n != c.n {
                return Err(format!("parameter file has n={n}, expected {}", c.n).into());
            }
            Some(beta)
        }
        (None, Some(_)) => None,
        (None, None) => Some(spec.zeros()),
    };
    let body = match (c.format, beta) {
        (Format::Edges, Some(beta)) => write_hypergraphs(&sample(&spec, &beta, &cfg)?)?,
        (Format::Degrees, Some(beta)) => {
            write_rounded_degrees(&sample_mean_degrees(&spec, &beta, &cfg)?)?
        }
        (format, None) => {
            let hs = sample_fixed_density(spec.space(), c.density.expect("density set"), &cfg)?;
            match format {
                Format::Edges => write_hypergraphs(&hs)?,
                _ => write_rounded_degrees(&mean_degrees(&hs, spec.space())?)?,
            }
        }
        (f, _) => return Err(format!("simulate writes edges or degrees, not {f:?}").into()),
    };
    Ok(Outcome::single(
        format!("{}{body}", config.comment_line()),
        0,
    ))
}

fn write_rounded_degrees(d: &DegreeSequence) -> CliResult<String> {
    let d = if d.has_layers() {
        DegreeSequence::from_layers(
            d.n(),
            d.layers()
                .iter()
                .map(|l| (l.size, rounded(&l.values)))
                .collect(),
        )?
    } else {
        DegreeSequence::from_totals(rounded(d.total()))?
    };
    Ok(write_degrees(&d))
}

#[derive(Serialize)]
struct LrtOut<'a> {
    config: &'a RunConfig,
    lambda: f64,
    df: usize,
    p_value: f64,
    reject: Rejections,
    loglik_layered: f64,
    loglik_general: f64,
    observations: usize,
}

fn lrt(config: &RunConfig, c: &LrtConfig) -> CliResult<Outcome> {
    let data = Data::read(&c.input)?;
    let space = EdgeSpace::new(c.n, c.sizes.clone())?;
    let opts = FixedPointOptions {
        tol: c.solver.tol,
        max_iter: c.solver.max_iter,
        damping: parse_damping(&c.solver.damping)?,
        ..Default::default()
    };
    let result = match &data {
        Data::Edges(hs) => lrt_from_hypergraphs(&space, hs, &opts),
        Data::Degrees(d) => lrt_layered_vs_general(&space, d, c.observations, &opts),
    };
    let r = match result {
        Ok(r) => r,
        Err(hyperbeta::Error::FitFailed { model, status }) => {
            eprintln!("{model} model fit failed with status {status}");
            return Ok(Outcome {
                files: Vec::new(),
                code: exit_code(status.into()),
            });
        }
        Err(e) => return Err(e.into()),
    };
    let out = LrtOut {
        config,
        lambda: round_sig(r.lambda),
        df: r.df,
        p_value: round_sig(r.p_value),
        reject: r.reject,
        loglik_layered: round_sig(r.loglik_layered),
        loglik_general: round_sig(r.loglik_general),
        observations: r.observations,
    };
    Ok(Outcome::single(json(&out)?, 0))
}

#[derive(Serialize)]
struct ScanRow {
    density: f64,
    fraction_exists: f64,
    fraction_undetermined: f64,
}

#[derive(Serialize)]
struct ScanOut<'a> {
    config: &'a RunConfig,
    summary: Vec<ScanRow>,
    records: Vec<hyperbeta::existence::ScanRecord>,
}

fn scan(config: &RunConfig, c: &ScanConfig) -> CliResult<Outcome> {
    let spec = ModelSpec::new(EdgeSpace::new(c.n, c.sizes.clone())?, c.model)?;
    let opts = FixedPointOptions {
        tol: c.solver.tol,
        max_iter: c.solver.max_iter,
        damping: parse_damping(&c.solver.damping)?,
        ..Default::default()
    };
    let s = scan_existence(
        &spec,
        &c.densities,
        &SampleConfig::new(c.seed, c.replicates),
        &opts,
    )?;
    match c.format {
        Format::Json => {
            let summary = s
                .fraction_exists()
                .into_iter()
                .zip(s.fraction_undetermined())
                .map(|((density, e), (_, u))| ScanRow {
                    density,
                    fraction_exists: round_sig(e),
                    fraction_undetermined: round_sig(u),
                })
                .collect();
            let records = s
                .records
                .iter()
                .cloned()
                .map(|mut r| {
                    r.max_abs_beta = round_sig(r.max_abs_beta);
                    r
                })
                .collect();
            let out = ScanOut {
                config,
                summary,
                records,
            };
            Ok(Outcome::single(json(&out)?, 0))
        }
        _ => {
            let head = config.comment_line();
            Ok(Outcome {
                files: vec![
                    (
                        Some("summary.csv".into()),
                        format!("{head}{}", s.summary_csv()),
                    ),
                    (
                        Some("detail.csv".into()),
                        format!("{head}{}", s.detail_csv()),
                    ),
                ],
                code: 0,
            })
        }
    }
}
