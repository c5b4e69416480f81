//! Experiment orchestration: maximum-principle runs, v-independence tests,
//! parameter sweeps and machine-readable reports.

use std::collections::{BTreeMap, HashMap};
use std::io::{self, Write};
use std::path::Path;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Exponent, SimConfig};
use crate::error::{Error, Result};
use crate::grid::{make_grid, PeriodicGrid, RadialSymbol};
use crate::kernels::{l1_norm_certified, L1Certificate, RealKernel};
use crate::pointwise::MIXED_BOUND_CONSTANT_UNIT_GAP;
use crate::quadrature::{integrate, Tolerance};
use crate::solver::{fmt17, simulate, NormSeries};
use crate::symbols::{
    c_beta, regime, residual_symbol_with, DissipationSpec, Evaluation, Regime, Variant,
};

/// Relative slack on the bound constant.
pub const PASS_RELATIVE_SLACK: f64 = 0.10;
/// Absolute slack on the bound constant.
pub const PASS_ABSOLUTE_SLACK: f64 = 1e-3;
/// Growth constants skip `t < T_MIN_FRACTION·t_final`.
pub const T_MIN_FRACTION: f64 = 0.1;
/// Largest Cartesian product a sweep accepts by default.
pub const DEFAULT_SWEEP_CAP: usize = 256;
/// Relative spread tolerated across amplitudes.
pub const INDEPENDENCE_RELATIVE: f64 = 0.05;
/// Absolute spread tolerated across amplitudes when growth is near zero.
pub const INDEPENDENCE_ABSOLUTE: f64 = 1e-3;

/// Base grid of the residual-kernel certification: `R = 200, n = 2^15` in
/// 1D and `R = 50, n = 2^10` in 2D.
pub fn residual_base_grid(dim: usize) -> Result<PeriodicGrid> {
    match dim {
        1 => make_grid(1, 1 << 15, 200.0),
        2 => make_grid(2, 1 << 10, 50.0),
        _ => Err(Error::InvalidGrid(format!("dim must be 1 or 2, got {dim}"))),
    }
}

type CacheKey = (Variant, u64, u64, u64, usize);

fn l1_cache() -> &'static Mutex<HashMap<CacheKey, L1Certificate>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, L1Certificate>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Certified `‖F⁻¹P‖_{L¹}` of the residual in dimension `dim`, memoized
/// per `(variant, γ, β, λ, dim)`.
///
/// The residual vanishes for pure powers and equals the identity for
/// variant NONE, whose kernel is a unit point mass.
pub fn residual_l1(spec: &DissipationSpec, dim: usize) -> Result<L1Certificate> {
    spec.validate()?;
    let exact = |estimate| L1Certificate {
        estimate,
        converged: true,
        symbol_bounded: true,
    };
    if spec.variant == Variant::None {
        return Ok(exact(1.0));
    }
    if spec.is_degenerate() {
        return Ok(exact(0.0));
    }
    let key = (
        spec.variant,
        spec.gamma.to_bits(),
        spec.beta.to_bits(),
        spec.lambda.to_bits(),
        dim,
    );
    if let Some(c) = l1_cache().lock().expect("cache poisoned").get(&key) {
        return Ok(*c);
    }
    let residual = residual_symbol_with(spec, Evaluation::ClosedForm)?;
    let cert = l1_norm_certified(&residual, &residual_base_grid(dim)?)?;
    l1_cache().lock().expect("cache poisoned").insert(key, cert);
    Ok(cert)
}

/// `λ·C_β·Ĉ'_d·∫₀^{γ−1} τ^β (1 + (2−γ+τ)^{1−γ+τ}) dτ` for variant A with
/// `1 < γ ≤ 2` and `β > 0`, and zero otherwise.
///
/// This is the max-point lower bound of the high-range main term: at `τ`
/// the integrand is the mixed operator with `s₂ = γ−τ`, `s₁ = s₂−1` and
/// `c₁ = λτ`.
pub fn mixed_term(spec: &DissipationSpec, dim: usize) -> Result<f64> {
    spec.validate()?;
    if regime(spec) != Regime::High {
        return Ok(0.0);
    }
    if !(1..=2).contains(&dim) {
        return Err(Error::InvalidGrid(format!("dim must be 1 or 2, got {dim}")));
    }
    let (g, b) = (spec.gamma, spec.beta);
    let integral = integrate(
        |t| t.powf(b) * (1.0 + (2.0 - g + t).powf(1.0 - g + t)),
        0.0,
        g - 1.0,
        Tolerance::relative(1e-12),
    )?;
    Ok(spec.lambda * c_beta(b)? * MIXED_BOUND_CONSTANT_UNIT_GAP[dim - 1] * integral.value)
}

/// `ν·(residual L¹ + mixed term)`.
pub fn assemble_bound(nu: f64, residual_l1: f64, mixed_term: f64) -> f64 {
    nu * (residual_l1 + mixed_term)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstant {
    pub residual_l1_estimate: f64,
    pub residual_l1_converged: bool,
    pub mixed_term: f64,
    pub value: f64,
}

pub fn bound_constant(spec: &DissipationSpec, dim: usize) -> Result<BoundConstant> {
    let cert = residual_l1(spec, dim)?;
    let mixed = mixed_term(spec, dim)?;
    Ok(BoundConstant {
        residual_l1_estimate: cert.estimate,
        residual_l1_converged: cert.converged,
        mixed_term: mixed,
        value: assemble_bound(spec.nu, cert.estimate, mixed),
    })
}

/// Largest `(log‖θ(t)‖_p − log‖θ₀‖_p)/t` over samples with
/// `t ≥ 0.1·t_final`, `t > 0`; `None` when no sample qualifies.
pub fn growth_constant(times: &[f64], norms: &[f64], t_final: f64) -> Option<f64> {
    let first = *norms.first()?;
    times
        .iter()
        .zip(norms)
        .filter(|(t, _)| **t > 0.0 && **t >= T_MIN_FRACTION * t_final)
        .map(|(t, x)| (x.ln() - first.ln()) / t)
        .reduce(f64::max)
}

pub fn pass_threshold(bound: f64) -> f64 {
    (1.0 + PASS_RELATIVE_SLACK) * bound + PASS_ABSOLUTE_SLACK
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: SimConfig,
    /// Keyed by exponent label (`"1"`, `"2"`, `"inf"`).
    pub growth_constant: BTreeMap<String, Option<f64>>,
    pub residual_l1_estimate: f64,
    pub residual_l1_converged: bool,
    pub mixed_term: f64,
    pub bound_constant: f64,
    /// `1.1·bound_constant + 1e-3`.
    pub threshold: f64,
    pub samples: usize,
    pub failure: Option<String>,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn growth(&self, p: Exponent) -> Option<f64> {
        self.growth_constant.get(&p.label()).copied().flatten()
    }

    pub fn to_json(&self) -> Result<String> {
        to_json_17(self)
    }
}

/// A report together with the sampled series it was computed from.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: ExperimentReport,
    pub series: NormSeries,
}

impl RunOutcome {
    pub fn save(&self, csv: &Path, json: &Path) -> Result<()> {
        self.series.save_csv(csv)?;
        write_text(json, &self.report.to_json()?)
    }

    pub fn is_numerical_failure(&self) -> bool {
        self.report.failure.is_some()
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Runs `cfg` and certifies `‖θ(t)‖_p ≤ e^{ĉt}‖θ₀‖_p` against the
/// assembled bound. Only configuration errors are returned as `Err`;
/// numerical failures produce a report with `pass = false`.
pub fn run_max_principle(cfg: &SimConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let (series, mut failure) = match simulate(cfg) {
        Ok((series, _)) => (series, None),
        Err(f) => (f.series, Some(f.error.to_string())),
    };
    let bound = match bound_constant(&cfg.spec, cfg.dim) {
        Ok(b) => b,
        Err(e) => {
            failure.get_or_insert_with(|| format!("bound constant: {e}"));
            BoundConstant {
                residual_l1_estimate: f64::NAN,
                residual_l1_converged: false,
                mixed_term: f64::NAN,
                value: f64::NAN,
            }
        }
    };
    let threshold = pass_threshold(bound.value);
    let mut growth = BTreeMap::new();
    let mut pass = failure.is_none();
    for p in &cfg.p_list {
        let g = series
            .series(*p)
            .and_then(|norms| growth_constant(&series.times, norms, cfg.t_final));
        if let Some(g) = g {
            pass &= g <= threshold;
        }
        growth.insert(p.label(), g);
    }
    Ok(RunOutcome {
        report: ExperimentReport {
            config: cfg.clone(),
            growth_constant: growth,
            residual_l1_estimate: bound.residual_l1_estimate,
            residual_l1_converged: bound.residual_l1_converged,
            mixed_term: bound.mixed_term,
            bound_constant: bound.value,
            threshold,
            samples: series.len(),
            failure,
            pass,
        },
        series,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub amplitudes: Vec<f64>,
    pub reports: Vec<ExperimentReport>,
    /// Growth constants per exponent, in amplitude order.
    pub growth_constants: BTreeMap<String, Vec<Option<f64>>>,
    /// `max − min` of the growth constants per exponent.
    pub spread: BTreeMap<String, f64>,
    pub uniform: BTreeMap<String, bool>,
    pub pass: bool,
}

impl IndependenceReport {
    pub fn to_json(&self) -> Result<String> {
        to_json_17(self)
    }
}

/// Whether a set of growth constants agrees within 5% relative or 1e-3 absolute.
pub fn is_uniform(values: &[f64]) -> bool {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let spread = hi - lo;
    spread <= INDEPENDENCE_RELATIVE * scale || spread <= INDEPENDENCE_ABSOLUTE
}

/// Repeats `cfg` at each velocity amplitude and compares growth constants.
pub fn run_v_independence(
    cfg: &SimConfig,
    amplitudes: &[f64],
) -> Result<(IndependenceReport, Vec<RunOutcome>)> {
    if amplitudes.is_empty() {
        return Err(Error::Config("at least one amplitude is required".into()));
    }
    let configs: Vec<SimConfig> = amplitudes
        .iter()
        .map(|&a| {
            let mut c = cfg.clone();
            c.velocity.amplitude = a;
            c.validate().map(|_| c)
        })
        .collect::<Result<_>>()?;
    let outcomes = configs
        .par_iter()
        .map(run_max_principle)
        .collect::<Result<Vec<_>>>()?;
    let mut growth_constants = BTreeMap::new();
    let mut spread = BTreeMap::new();
    let mut uniform = BTreeMap::new();
    let mut pass = outcomes.iter().all(|o| o.report.failure.is_none());
    for p in &cfg.p_list {
        let gs: Vec<Option<f64>> = outcomes.iter().map(|o| o.report.growth(*p)).collect();
        let known: Vec<f64> = gs.iter().flatten().copied().collect();
        let ok = known.len() == gs.len() && is_uniform(&known);
        let hi = known.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = known.iter().copied().fold(f64::INFINITY, f64::min);
        pass &= ok;
        spread.insert(p.label(), if known.is_empty() { 0.0 } else { hi - lo });
        uniform.insert(p.label(), ok);
        growth_constants.insert(p.label(), gs);
    }
    let report = IndependenceReport {
        amplitudes: amplitudes.to_vec(),
        reports: outcomes.iter().map(|o| o.report.clone()).collect(),
        growth_constants,
        spread,
        uniform,
        pass,
    };
    Ok((report, outcomes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    Gamma,
    Beta,
    Lambda,
    Nu,
    Amplitude,
}

impl SweepParameter {
    fn apply(self, cfg: &mut SimConfig, value: f64) {
        match self {
            SweepParameter::Gamma => cfg.spec.gamma = value,
            SweepParameter::Beta => cfg.spec.beta = value,
            SweepParameter::Lambda => cfg.spec.lambda = value,
            SweepParameter::Nu => cfg.spec.nu = value,
            SweepParameter::Amplitude => cfg.velocity.amplitude = value,
        }
    }
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" => Ok(Self::Gamma),
            "beta" => Ok(Self::Beta),
            "lambda" => Ok(Self::Lambda),
            "nu" => Ok(Self::Nu),
            "amplitude" => Ok(Self::Amplitude),
            other => Err(Error::Config(format!("unknown sweep parameter {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    /// Parses `name=v1,v2,…`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, list) = s
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("sweep axis must look like name=v1,v2: {s:?}")))?;
        let values = list
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad value {v:?} in sweep axis {name}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            parameter: name.trim().parse()?,
            values,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub index: usize,
    pub parameters: BTreeMap<SweepParameter, f64>,
    pub report: Option<ExperimentReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    /// `bins` equal-width bins over `[min, max]` of `values`.
    pub fn new(values: &[f64], bins: usize) -> Self {
        if values.is_empty() || bins == 0 {
            return Self {
                edges: Vec::new(),
                counts: Vec::new(),
            };
        }
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let width = if hi > lo {
            (hi - lo) / bins as f64
        } else {
            1.0
        };
        let edges = (0..=bins).map(|i| lo + i as f64 * width).collect();
        let mut counts = vec![0; bins];
        for v in values {
            let i = (((v - lo) / width) as usize).min(bins - 1);
            counts[i] += 1;
        }
        Self { edges, counts }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAggregate {
    pub cells: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub max_growth: BTreeMap<String, Option<f64>>,
    pub histogram: BTreeMap<String, Histogram>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axes: Vec<SweepAxis>,
    pub cells: Vec<SweepCell>,
    pub aggregate: SweepAggregate,
}

impl SweepResult {
    pub fn to_json(&self) -> Result<String> {
        to_json_17(self)
    }
}

pub const HISTOGRAM_BINS: usize = 10;

/// Runs the Cartesian product of `axes` over `base`, first axis outermost.
///
/// Every cell keeps the base seeds, so cells differ only in the swept
/// parameters. A cell that fails validation or integration is recorded and
/// the sweep continues.
pub fn sweep(
    base: &SimConfig,
    axes: &[SweepAxis],
    cap: usize,
) -> Result<(SweepResult, Vec<Option<RunOutcome>>)> {
    let size: usize = axes.iter().map(|a| a.values.len()).product();
    if size > cap {
        return Err(Error::Config(format!(
            "sweep has {size} cells, above the cap of {cap}"
        )));
    }
    let mut assignments: Vec<BTreeMap<SweepParameter, f64>> = vec![BTreeMap::new()];
    for axis in axes {
        assignments = assignments
            .into_iter()
            .flat_map(|a| {
                axis.values.iter().map(move |&v| {
                    let mut next = a.clone();
                    next.insert(axis.parameter, v);
                    next
                })
            })
            .collect();
    }
    let runs: Vec<std::result::Result<RunOutcome, String>> = assignments
        .par_iter()
        .map(|params| {
            let mut cfg = base.clone();
            for (p, v) in params {
                p.apply(&mut cfg, *v);
            }
            run_max_principle(&cfg).map_err(|e| e.to_string())
        })
        .collect();
    let mut cells = Vec::with_capacity(runs.len());
    let mut outcomes = Vec::with_capacity(runs.len());
    for (index, (params, run)) in assignments.into_iter().zip(runs).enumerate() {
        let (report, error, outcome) = match run {
            Ok(o) => (Some(o.report.clone()), o.report.failure.clone(), Some(o)),
            Err(e) => (None, Some(e), None),
        };
        cells.push(SweepCell {
            index,
            parameters: params,
            report,
            error,
        });
        outcomes.push(outcome);
    }
    let mut max_growth = BTreeMap::new();
    let mut histogram = BTreeMap::new();
    for p in &base.p_list {
        let values: Vec<f64> = cells
            .iter()
            .filter_map(|c| c.report.as_ref().and_then(|r| r.growth(*p)))
            .collect();
        max_growth.insert(p.label(), values.iter().copied().reduce(f64::max));
        histogram.insert(p.label(), Histogram::new(&values, HISTOGRAM_BINS));
    }
    let passed = cells
        .iter()
        .filter(|c| c.report.as_ref().is_some_and(|r| r.pass))
        .count();
    let errors = cells.iter().filter(|c| c.error.is_some()).count();
    let aggregate = SweepAggregate {
        cells: cells.len(),
        passed,
        failed: cells.len() - passed,
        errors,
        max_growth,
        histogram,
        pass: passed == cells.len(),
    };
    Ok((
        SweepResult {
            axes: axes.to_vec(),
            cells,
            aggregate,
        },
        outcomes,
    ))
}

/// Kernel diagnostics for reports; samples go to CSV separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSummary {
    pub label: String,
    pub grid: PeriodicGrid,
    pub l1_estimate: f64,
    pub converged: bool,
    pub min_value: f64,
    pub max_abs: f64,
    pub mass: f64,
    pub imaginary_residue: f64,
    pub history: Vec<crate::kernels::RefinementLevel>,
}

impl KernelSummary {
    pub fn new(label: &str, k: &RealKernel) -> Self {
        Self {
            label: label.to_string(),
            grid: k.grid,
            l1_estimate: k.l1_estimate,
            converged: k.converged,
            min_value: k.min_value,
            max_abs: k.max_abs,
            mass: k.mass,
            imaginary_residue: k.imaginary_residue,
            history: k.history.clone(),
        }
    }
}

/// Kernel profile `x, K(x)` along the first axis (through the origin in 2D).
pub fn write_kernel_csv(k: &RealKernel, out: &mut impl Write) -> Result<()> {
    let n = k.grid.n;
    writeln!(out, "x,k")?;
    for i in 0..n {
        let value = match k.grid.dim {
            1 => k.samples[i],
            _ => k.samples[i * n + n / 2],
        };
        writeln!(out, "{},{}", fmt17(k.grid.coord(i)), fmt17(value))?;
    }
    Ok(())
}

/// `ξ, full, main, residual` for each requested `|ξ|`.
pub fn write_symbol_csv(
    xis: &[f64],
    full: &RadialSymbol,
    main: &RadialSymbol,
    residual: &RadialSymbol,
    out: &mut impl Write,
) -> Result<()> {
    writeln!(out, "xi,full,main,residual")?;
    for &x in xis {
        writeln!(
            out,
            "{},{},{},{}",
            fmt17(x),
            fmt17(full.eval(x)?),
            fmt17(main.eval(x)?),
            fmt17(residual.eval(x)?)
        )?;
    }
    Ok(())
}

/// Pretty JSON with every float written to 17 significant digits.
pub fn to_json_17<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut buf,
        Sig17(serde_json::ser::PrettyFormatter::new()),
    );
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

struct Sig17<'a>(serde_json::ser::PrettyFormatter<'a>);

impl serde_json::ser::Formatter for Sig17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn save_json<T: Serialize + ?Sized>(value: &T, path: &Path) -> Result<()> {
    write_text(path, &to_json_17(value)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_constant_skips_early_times() {
        let times = [0.0, 0.05, 0.5, 1.0];
        let norms = [1.0, 100.0, (-0.5f64).exp(), (-2.0f64).exp()];
        let g = growth_constant(&times, &norms, 1.0).unwrap();
        assert!((g + 1.0).abs() < 1e-14);
        assert_eq!(growth_constant(&[0.0], &[1.0], 0.0), None);
    }

    #[test]
    fn bound_is_monotone() {
        assert!(assemble_bound(0.2, 1.0, 0.5) > assemble_bound(0.1, 1.0, 0.5));
        assert!(assemble_bound(0.1, 2.0, 0.5) > assemble_bound(0.1, 1.0, 0.5));
        assert_eq!(pass_threshold(0.0), PASS_ABSOLUTE_SLACK);
    }

    #[test]
    fn degenerate_residuals_are_exact() {
        let frac = DissipationSpec::new(Variant::A, 1.5, 0.0, 2.0, 0.1).unwrap();
        assert_eq!(residual_l1(&frac, 2).unwrap().estimate, 0.0);
        assert_eq!(mixed_term(&frac, 2).unwrap(), 0.0);
        let id = DissipationSpec::new(Variant::None, 0.0, 0.0, 2.0, 0.5).unwrap();
        let b = bound_constant(&id, 2).unwrap();
        assert_eq!(b.value, 0.5);
    }

    #[test]
    fn mixed_term_vanishes_at_gamma_one() {
        let s = DissipationSpec::new(Variant::A, 1.0 + 1e-9, 1.0, 2.0, 1.0).unwrap();
        assert!(mixed_term(&s, 1).unwrap() < 1e-12);
        let s = DissipationSpec::new(Variant::A, 2.0, 1.0, 2.0, 1.0).unwrap();
        // ∫₀¹ τ(1 + τ^τ) dτ for γ = 2, β = 1
        let m = mixed_term(&s, 1).unwrap();
        assert!(m > 0.0 && m.is_finite());
    }

    #[test]
    fn uniformity_rule() {
        assert!(is_uniform(&[-0.100, -0.104]));
        assert!(!is_uniform(&[-0.100, -0.110]));
        assert!(is_uniform(&[0.0002, -0.0005]));
        assert!(is_uniform(&[0.3]));
    }

    #[test]
    fn histogram_counts_everything() {
        let h = Histogram::new(&[0.0, 0.1, 0.5, 1.0, 1.0], 4);
        assert_eq!(h.counts.iter().sum::<usize>(), 5);
        assert_eq!(h.edges.len(), 5);
        assert_eq!(h.counts[3], 2);
    }

    #[test]
    fn json_floats_have_17_digits() {
        let text = to_json_17(&BTreeMap::from([("x", 0.1f64), ("y", f64::NAN)])).unwrap();
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
        assert!(text.contains("null"));
        let back: BTreeMap<String, Option<f64>> = serde_json::from_str(&text).unwrap();
        assert_eq!(back["x"], Some(0.1));
    }

    #[test]
    fn sweep_axis_parses() {
        let a: SweepAxis = "gamma=0.5,1,2".parse().unwrap();
        assert_eq!(a.parameter, SweepParameter::Gamma);
        assert_eq!(a.values, vec![0.5, 1.0, 2.0]);
        assert!("delta=1".parse::<SweepAxis>().is_err());
        assert!("gamma".parse::<SweepAxis>().is_err());
    }
}
