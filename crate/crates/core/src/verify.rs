//! Fixed property suite with pinned seeds, aggregated into one pass/fail
//! report.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{SimConfig, TimeDependence, VelocityKind};
use crate::error::Result;
use crate::grid::{apply_multiplier, make_grid, PeriodicGrid, RadialSymbol, SpectralField};
use crate::harness::{assemble_bound, to_json_17};
use crate::kernels::{heat_kernel, l1_norm_certified};
use crate::pointwise::{
    calibration_sample, frac_laplacian_quadrature_with, lp_dissipation_functional,
    maxpoint_sign_check, mixed_violation_ratio, symmetrized_form_oracle_with, symmetrized_tail_sum,
    SingularQuadrature, CALIBRATION_SEED, MIXED_BOUND_CONSTANT, MIXED_BOUND_CONSTANT_UNIT_GAP,
};
use crate::random::{band_limited_field, derive_seed, random_trig_polynomial};
use crate::solver::{make_velocity, simulate_from, step, SimState};
use crate::symbols::{
    decompose, full_symbol, residual_symbol, residual_three_term, symbol_a, symbol_fractional,
    verify_log_identity, DissipationSpec, Evaluation, Variant,
};

/// Master seed of every randomized property.
pub const VERIFY_SEED: u64 = 0x1dd1_55ed;

/// Hooks for mutation testing of the suite itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Multiplies the normalization constant `C_{s,d}` wherever the
    /// real-space form of `|∇|^s` is evaluated.
    pub constant_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            constant_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub pass: bool,
    /// Worst observed value of the checked quantity.
    pub measured: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub properties: Vec<PropertyResult>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> Result<String> {
        to_json_17(self)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }
}

fn check(name: &str, outcome: Result<(bool, f64, String)>) -> PropertyResult {
    match outcome {
        Ok((pass, measured, detail)) => PropertyResult {
            name: name.to_string(),
            pass,
            measured: Some(measured),
            detail,
        },
        Err(e) => PropertyResult {
            name: name.to_string(),
            pass: false,
            measured: None,
            detail: format!("error: {e}"),
        },
    }
}

fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    let scale = b
        .iter()
        .fold(0.0_f64, |m, x| m.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    a.iter()
        .zip(b)
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
        / scale
}

type Property = fn(&VerifyOptions) -> Result<(bool, f64, String)>;

const PROPERTIES: [(&str, Property); 15] = [
    ("parseval", parseval),
    ("multiplier_composition", composition),
    ("constants_annihilated", constants_annihilated),
    ("decomposition_identity", decomposition_identity),
    ("log_identity", log_identity),
    ("three_term_consistency", three_term_consistency),
    ("kernel_gaussian_pair", kernel_gaussian_pair),
    ("heat_kernel_positivity", heat_kernel_positivity),
    ("maxpoint_sign", maxpoint_sign),
    ("mixed_bound_calibration", mixed_bound_calibration),
    ("oracle_consistency", oracle_consistency),
    ("symmetrized_nonnegativity", symmetrized_nonnegativity),
    ("tail_sum_decay", tail_sum_decay),
    ("spectral_dissipation_exactness", dissipation_exactness),
    ("mean_preservation", mean_preservation),
];

/// Runs every property; failures are data, never errors.
pub fn verify_suite(opts: &VerifyOptions) -> VerifyReport {
    let mut properties: Vec<PropertyResult> = PROPERTIES
        .par_iter()
        .map(|(name, f)| check(name, f(opts)))
        .collect();
    properties.push(check("bound_monotone", bound_monotone(opts)));
    let pass = properties.iter().all(|p| p.pass);
    VerifyReport { properties, pass }
}

fn parseval(_: &VerifyOptions) -> Result<(bool, f64, String)> {
    let mut worst = 0.0_f64;
    for (dim, n) in [(1, 64), (2, 32)] {
        let g = make_grid(dim, n, 2.5)?;
        for i in 0..50 {
            let f = band_limited_field(&g, n / 4, 0.5, true, derive_seed(VERIFY_SEED, i))?;
            let phys: f64 = f.physical().iter().map(|x| x * x).sum::<f64>() * g.cell_volume;
            // Σ|f̂_k|²/N^d per lattice point, times (2R)^d, equals ∫|f|².
            let spec: f64 = f.spectral().iter().map(|c| c.norm_sqr()).sum::<f64>() * g.cell_volume
                / g.len() as f64;
            worst = worst.max((phys - spec).abs() / phys);
        }
    }
    Ok((
        worst <= 1e-10,
        worst,
        "max relative Parseval defect over 100 fields".into(),
    ))
}

fn composition(_: &VerifyOptions) -> Result<(bool, f64, String)> {
    let g = make_grid(2, 32, PI)?;
    let m1 = symbol_a(&DissipationSpec::a(1.0, 1.0, 2.0)?)?;
    let m2 = symbol_fractional(0.5)?;
    let mut worst = 0.0_f64;
    for i in 0..10 {
        let f = band_limited_field(&g, 10, 0.0, true, derive_seed(VERIFY_SEED ^ 1, i))?;
        let twice = apply_multiplier(&apply_multiplier(&f, &m1)?, &m2)?;
        let once = apply_multiplier(&f, &m1.product(&m2))?;
        worst = worst.max(max_rel(twice.physical(), once.physical()));
    }
    Ok((worst <= 1e-10, worst, "m2(m1 f) vs (m1 m2) f".into()))
}

fn constants_annihilated(_: &VerifyOptions) -> Result<(bool, f64, String)> {
    let g = make_grid(2, 16, 1.0)?;
    let c = SpectralField::from_fn(g, |_| 2.5);
    let mut worst = 0.0_f64;
    for gamma in [0.3, 1.0, 1.7] {
        let out = apply_multiplier(&c, &symbol_a(&DissipationSpec::a(gamma, 0.7, 3.0)?)?)?;
        worst = worst.max(out.max_abs());
    }
    Ok((worst <= 1e-12, worst, "max |A c| for constant c".into()))
}

fn decomposition_identity(_: &VerifyOptions) -> Result<(bool, f64, String)> {
    let specs = [
        DissipationSpec::a(0.5, 0.5, 2.0)?,
        DissipationSpec::a(1.0, 2.0, 5.0)?,
        DissipationSpec::a(1.5, 1.0, 2.0)?,
        DissipationSpec::new(Variant::A1, 1.8, 0.7, 3.0, 1.0)?,
    ];
    let mut worst = 0.0_f64;
    for spec in specs {
        let full = full_symbol(&spec)?;
        let quad = decompose(&spec, Evaluation::Quadrature)?;
        let closed = decompose(&spec, Evaluation::ClosedForm)?;
        for i in 0..20 {
            let xi = 10f64.powf(-2.0 + 5.0 * i as f64 / 19.0);
            let f = full.eval(xi)?;
            let sum = quad.main.eval(xi)? + quad.residual.eval(xi)?;
            worst = worst.max((sum - f).abs() / f.abs());
            let (a, b) = (quad.main.eval(xi)?, closed.main.eval(xi)?);
            worst = worst.max((a - b).abs() / a.abs().max(1e-300));
        }
    }
    Ok((
        worst <= 1e-9,
        worst,
        "main + residual vs full, quadrature vs closed form".into(),
    ))
}

fn log_identity(_: &VerifyOptions) -> Result<(bool, f64, String)> {
    let mut worst = 0.0_f64;
    for beta in [0.3, 1.0, 2.5] {
        for lambda in [1.1, 2.0, 10.0] {
            for xi in [0.0, 0.7, 50.0] {
                worst = worst.max(verify_log_identity(beta, lambda, xi)?);
            }
        }
    }
    Ok((
        worst <= 1e-9,
        worst,
        "relative error of the log identity".into(),
    ))
}

fn three_term_consistency(_: &VerifyOptions) -> Result<(bool, f64, String)> {
    let mut worst = 0.0_f64;
    for spec in [
        DissipationSpec::a(0.6, 0.8, 2.0)?,
        DissipationSpec::new(Variant::A1, 1.4, 1.5, 4.0, 1.0)?,
    ] {
        let three = residual_three_term(&spec)?;
        let sub = residual_symbol(&spec)?;
        for xi in [0.05, 1.0, 7.0, 300.0] {
            let (a, b) = (three.eval(xi)?, sub.eval(xi)?);
            worst = worst.max((a - b).abs() / b.abs().max(1e-300));
        }
    }
    Ok((
        worst <= 1e-8,
        worst,
        "three-term residual vs full − main".into(),
    ))
}

fn kernel_gaussian_pair(_: &VerifyOptions) -> Result<(bool, f64, String)> {
    // F⁻¹(e^{−|ξ|²}) is a positive Gaussian of unit mass.
    let g = make_grid(1, 1 << 10, 40.0)?;
    let m = RadialSymbol::from_fn("gauss", |x| (-x * x).exp());
    let cert = l1_norm_certified(&m, &g)?;
    let err = (cert.estimate - 1.0).abs();
    Ok((
        err <= 1e-8 && cert.converged,
        err,
        "| ‖K‖₁ − 1 | for the Gaussian pair".into(),
    ))
}

fn heat_kernel_positivity(_: &VerifyOptions) -> Result<(bool, f64, String)> {
    let g = make_grid(1, 1 << 12, 100.0)?;
    let mut worst = 0.0_f64;
    for (gamma, beta) in [(0.5, 1.0), (1.0, 1.0), (1.5, 0.5)] {
        let r = heat_kernel(&DissipationSpec::a(gamma, beta, 2.0)?, 1.0, &g)?;
        worst = worst.max(r.negative_mass_fraction);
    }
    Ok((
        worst <= 1e-6,
        worst,
        "negative mass fraction of e^{-tA} kernels".into(),
    ))
}

fn maxpoint_sign(_: &VerifyOptions) -> Result<(bool, f64, String)> {
    let g = make_grid(1, 64, PI)?;
    let mut worst = f64::INFINITY;
    for i in 0..50 {
        let f = random_trig_polynomial(&g, 1 + (i as usize % 10), derive_seed(VERIFY_SEED ^ 2, i))?;
        for s in [0.3, 1.0, 1.7] {
            let r = maxpoint_sign_check(&f, s)?;
            worst = worst.min(r.operator_value / f.max_abs());
        }
    }
    Ok((worst >= -1e-6, worst, "min (|∇|^s f)(x₀)/‖f‖∞".into()))
}

fn mixed_bound_calibration(_: &VerifyOptions) -> Result<(bool, f64, String)> {
    let mut worst = 0.0_f64;
    for dim in [1, 2] {
        for unit_gap in [false, true] {
            let stored = if unit_gap {
                MIXED_BOUND_CONSTANT_UNIT_GAP[dim - 1]
            } else {
                MIXED_BOUND_CONSTANT[dim - 1]
            };
            for i in 0..40 {
                let c = calibration_sample(dim, unit_gap, CALIBRATION_SEED, i)?;
                worst = worst.max(mixed_violation_ratio(&c.field, &c.op, unit_gap)? / stored);
            }
        }
    }
    Ok((
        worst <= 1.0,
        worst,
        "violation ratio / stored constant".into(),
    ))
}

fn oracle_consistency(opts: &VerifyOptions) -> Result<(bool, f64, String)> {
    let quad_opts = SingularQuadrature {
        constant_scale: opts.constant_scale,
        ..SingularQuadrature::default()
    };
    let mut worst = 0.0_f64;
    // Real-space quadrature against the spectral multiplier: the ratio is
    // the normalization ratio ½ exactly.
    let g = make_grid(1, 64, PI)?;
    for i in 0..3 {
        let f = band_limited_field(&g, 6, 1.0, true, derive_seed(VERIFY_SEED ^ 3, i))?;
        let x0 = -1.0 + i as f64;
        for s in [0.5, 1.3] {
            let spectral = apply_multiplier(&f, &symbol_fractional(s)?)?
                .interpolant()
                .value(&[x0]);
            let q = frac_laplacian_quadrature_with(&f, x0, s, 0.05, quad_opts)?.value;
            worst = worst.max((q - 0.5 * spectral).abs() / spectral.abs().max(1e-3));
        }
    }
    // Double-sum oracle against the spectral L^p functional, same ratio up
    // to the O(dx^{2−s}) error of the double sum.
    let g = make_grid(1, 128, PI)?;
    let mut sum_worst = 0.0_f64;
    for i in 0..3 {
        let f = band_limited_field(&g, 8, 1.0, true, derive_seed(VERIFY_SEED ^ 4, i))?;
        for p in [1.0, 2.0, 3.0] {
            let o = symmetrized_form_oracle_with(&f, 0.5, p, opts.constant_scale)?;
            let l = lp_dissipation_functional(&f, &symbol_fractional(0.5)?, p)?;
            sum_worst = sum_worst.max((o / (0.5 * l) - 1.0).abs());
        }
    }
    Ok((
        worst <= 1e-4 && sum_worst <= 2e-2,
        worst,
        format!("quadrature ratio defect {worst:.3e} (tol 1e-4), double-sum defect {sum_worst:.3e} (tol 2e-2)"),
    ))
}

fn symmetrized_nonnegativity(opts: &VerifyOptions) -> Result<(bool, f64, String)> {
    let g = make_grid(1, 32, PI)?;
    let mut worst = f64::INFINITY;
    for i in 0..20 {
        let f = random_trig_polynomial(&g, 1 + i as usize % 6, derive_seed(VERIFY_SEED ^ 5, i))?;
        for (s, p) in [(0.3, 1.0), (0.5, 2.0), (0.9, 3.0)] {
            worst = worst.min(symmetrized_form_oracle_with(&f, s, p, opts.constant_scale)?);
        }
    }
    Ok((worst >= 0.0, worst, "min symmetrized form".into()))
}

fn tail_sum_decay(_: &VerifyOptions) -> Result<(bool, f64, String)> {
    let g = make_grid(1, 64, PI)?;
    let period = 2.0 * PI;
    let mut worst = 0.0_f64;
    for i in 0..3 {
        let f = random_trig_polynomial(&g, 5, derive_seed(VERIFY_SEED ^ 6, i))?;
        for s in [1.2, 1.5, 1.8] {
            for a in [period, 2.0 * period, 4.0 * period] {
                let t1 = symmetrized_tail_sum(&f, s, 2.0, a)?;
                let t2 = symmetrized_tail_sum(&f, s, 2.0, 2.0 * a)?;
                worst = worst.max(t2 / t1 / 2f64.powf(1.0 - s));
            }
        }
    }
    Ok((worst <= 1.1, worst, "tail(2A) / (2^{1−s} tail(A))".into()))
}

fn dissipation_exactness(_: &VerifyOptions) -> Result<(bool, f64, String)> {
    let g = make_grid(2, 32, PI)?;
    let spec = DissipationSpec::new(Variant::A, 1.3, 0.8, 2.0, 0.7)?;
    let theta = band_limited_field(&g, 8, 1.0, true, VERIFY_SEED)?;
    let mut state = SimState {
        t: 0.0,
        theta: theta.clone(),
        spec,
        v: make_velocity(VelocityKind::Zero, 0.0, 0, &g, TimeDependence::Steady)?,
        dt: 0.05,
    };
    for _ in 0..20 {
        state = step(&state)?;
    }
    let once = apply_multiplier(&theta, &full_symbol(&spec)?.scaled(spec.nu).exp_neg(1.0))?;
    let err = max_rel(state.theta.physical(), once.physical());
    Ok((err <= 1e-12, err, "20 steps vs e^{−νtm} at once".into()))
}

fn mean_preservation(_: &VerifyOptions) -> Result<(bool, f64, String)> {
    let cfg = SimConfig::from_json(
        r#"{"dim": 2, "n": 32, "half_width": 3.141592653589793,
            "spec": {"variant": "A", "gamma": 1.0, "beta": 1.0, "lambda": 2.0, "nu": 0.2},
            "velocity": {"kind": "STREAM", "amplitude": 1.0, "seed": 3},
            "theta_seed": 4, "p_list": [2], "t_final": 0.5, "sample_every": 1000}"#,
    )?;
    let g: PeriodicGrid = cfg.grid()?;
    let theta = band_limited_field(&g, 4, 1.0, true, VERIFY_SEED ^ 7)?;
    let state = SimState {
        t: 0.0,
        theta: theta.clone(),
        spec: cfg.spec,
        v: make_velocity(VelocityKind::Stream, 1.0, 3, &g, TimeDependence::Steady)?,
        dt: 0.01,
    };
    let (_, end) = simulate_from(&cfg, state).map_err(|f| f.error)?;
    let mean = |f: &SpectralField| f.physical().iter().sum::<f64>() * g.cell_volume;
    let (m0, m1) = (mean(&theta), mean(&end.theta));
    let err = (m1 - m0).abs() / m0.abs();
    Ok((err <= 1e-8, err, "relative drift of ∫θ".into()))
}

fn bound_monotone(_: &VerifyOptions) -> Result<(bool, f64, String)> {
    let values = [0.0, 0.1, 0.5, 1.0, 3.0];
    let mut worst = f64::INFINITY;
    for w in values.windows(2) {
        for &x in &values {
            worst = worst.min(assemble_bound(w[1], x, 0.2) - assemble_bound(w[0], x, 0.2));
            worst = worst.min(assemble_bound(x, w[1], 0.2) - assemble_bound(x, w[0], 0.2));
        }
    }
    Ok((
        worst >= 0.0,
        worst,
        "smallest increment of ν·(L¹ + mixed) along ν and L¹".into(),
    ))
}
