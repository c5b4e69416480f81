//! Dissipation symbols and their nonlocal decomposition.
//!
//! For `β > 0` and `C_β = 1/Γ(β)` the identity
//! `log^{−β}(a) = C_β ∫₀^∞ τ^{β−1} a^{−τ} dτ` splits
//! `m(ξ) = |ξ|^γ / log^β(λ+|ξ|)` into a superposition of fractional powers
//! (the main term) plus a residual multiplier `P`. The residual is always
//! defined by subtraction, so `main + residual = full` holds by construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::RadialSymbol;
use crate::quadrature::{integrate_power_exponential_tail, integrate_power_weight, Tolerance};
use crate::special::{gamma_fn, lower_incomplete_gamma_scaled};

/// Relative tolerance for every τ-integral in this module.
pub const TAU_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Variant {
    /// `|ξ|^γ / log^β(λ+|ξ|)`
    A,
    /// `|ξ|^γ / log^β(λ+|ξ|²)`
    A1,
    /// `|ξ|^γ`
    Fractional,
    /// The identity operator.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DissipationSpec {
    pub variant: Variant,
    pub gamma: f64,
    pub beta: f64,
    pub lambda: f64,
    pub nu: f64,
}

impl DissipationSpec {
    pub fn new(variant: Variant, gamma: f64, beta: f64, lambda: f64, nu: f64) -> Result<Self> {
        let spec = Self {
            variant,
            gamma,
            beta,
            lambda,
            nu,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn a(gamma: f64, beta: f64, lambda: f64) -> Result<Self> {
        Self::new(Variant::A, gamma, beta, lambda, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if !(self.nu >= 0.0) || !self.nu.is_finite() {
            return bad(format!("nu must be >= 0, got {}", self.nu));
        }
        if self.variant == Variant::None {
            return Ok(());
        }
        if !(0.0..=2.0).contains(&self.gamma) {
            return bad(format!("gamma must lie in [0, 2], got {}", self.gamma));
        }
        if self.variant == Variant::Fractional {
            return Ok(());
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return bad(format!("beta must be >= 0, got {}", self.beta));
        }
        if !(self.lambda > 1.0) || !self.lambda.is_finite() {
            return bad(format!("lambda must be > 1, got {}", self.lambda));
        }
        Ok(())
    }

    /// True when the operator is a pure power (or the identity) and the
    /// decomposition is trivial.
    pub fn is_degenerate(&self) -> bool {
        matches!(self.variant, Variant::Fractional | Variant::None) || self.beta == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Regime {
    Low,
    High,
}

/// How τ-integrals of the main term are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluation {
    /// Adaptive Gauss–Kronrod in τ.
    Quadrature,
    /// Incomplete-gamma closed form (entire in `log|ξ|`, no special case at `|ξ| = 1`).
    ClosedForm,
}

#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub main: RadialSymbol,
    pub residual: RadialSymbol,
    pub regime: Regime,
    pub c_beta: f64,
}

fn power(xi: f64, e: f64) -> f64 {
    if xi == 0.0 {
        if e == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        xi.powf(e)
    }
}

fn check_variant(spec: &DissipationSpec, allowed: &[Variant], op: &str) -> Result<()> {
    spec.validate()?;
    if allowed.contains(&spec.variant) {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!(
            "{op} is not defined for variant {:?}",
            spec.variant
        )))
    }
}

/// `|ξ|^γ / log^β(λ+|ξ|)`
pub fn symbol_a(spec: &DissipationSpec) -> Result<RadialSymbol> {
    check_variant(spec, &[Variant::A], "symbol_a")?;
    let DissipationSpec {
        gamma,
        beta,
        lambda,
        ..
    } = *spec;
    Ok(RadialSymbol::from_fn(
        format!("A(g={gamma},b={beta},l={lambda})"),
        move |xi| power(xi, gamma) / (lambda + xi).ln().powf(beta),
    ))
}

/// `|ξ|^γ / log^β(λ+|ξ|²)`
pub fn symbol_a1(spec: &DissipationSpec) -> Result<RadialSymbol> {
    check_variant(spec, &[Variant::A1], "symbol_a1")?;
    let DissipationSpec {
        gamma,
        beta,
        lambda,
        ..
    } = *spec;
    Ok(RadialSymbol::from_fn(
        format!("A1(g={gamma},b={beta},l={lambda})"),
        move |xi| power(xi, gamma) / (lambda + xi * xi).ln().powf(beta),
    ))
}

/// `|ξ|^s`
pub fn symbol_fractional(s: f64) -> Result<RadialSymbol> {
    if !(0.0..=2.0).contains(&s) {
        return Err(Error::InvalidArgument(format!(
            "fractional order must lie in [0, 2], got {s}"
        )));
    }
    Ok(RadialSymbol::from_fn(format!("|xi|^{s}"), move |xi| {
        power(xi, s)
    }))
}

/// The multiplier of the operator described by `spec` (without `ν`).
pub fn full_symbol(spec: &DissipationSpec) -> Result<RadialSymbol> {
    spec.validate()?;
    match spec.variant {
        Variant::A => symbol_a(spec),
        Variant::A1 => symbol_a1(spec),
        Variant::Fractional => symbol_fractional(spec.gamma),
        Variant::None => Ok(RadialSymbol::constant(1.0)),
    }
}

pub fn c_beta(beta: f64) -> Result<f64> {
    if beta == 0.0 {
        Ok(0.0)
    } else {
        Ok(1.0 / gamma_fn(beta)?)
    }
}

fn tol() -> Tolerance {
    Tolerance::new(1e-300, TAU_TOLERANCE)
}

/// `∫₀^g τ^{b−1} x^{g−τ} dτ` by quadrature, `x ≥ 0`.
fn tau_integral_quadrature(x: f64, g: f64, b: f64) -> Result<f64> {
    if g == 0.0 || x == 0.0 {
        return Ok(0.0);
    }
    let l = x.ln();
    Ok(integrate_power_weight(|t: f64| ((g - t) * l).exp(), b, g, tol())?.value)
}

/// Closed form of the same integral: `x^g·g^b·γ*(b, g·log x)`.
fn tau_integral_closed(x: f64, g: f64, b: f64) -> Result<f64> {
    if g == 0.0 || x == 0.0 {
        return Ok(0.0);
    }
    Ok(x.powf(g) * g.powf(b) * lower_incomplete_gamma_scaled(b, g * x.ln())?)
}

fn tau_integral(x: f64, g: f64, b: f64, how: Evaluation) -> Result<f64> {
    match how {
        Evaluation::Quadrature => tau_integral_quadrature(x, g, b),
        Evaluation::ClosedForm => tau_integral_closed(x, g, b),
    }
}

/// Main term for `0 ≤ γ ≤ 1` (variant A) or `0 ≤ γ ≤ 2` (variant A1), by quadrature.
pub fn main_term_low(spec: &DissipationSpec) -> Result<RadialSymbol> {
    main_term_low_with(spec, Evaluation::Quadrature)
}

pub fn main_term_low_with(spec: &DissipationSpec, how: Evaluation) -> Result<RadialSymbol> {
    check_variant(spec, &[Variant::A, Variant::A1], "main_term_low")?;
    let DissipationSpec {
        variant,
        gamma,
        beta,
        ..
    } = *spec;
    if !(beta > 0.0) {
        return Err(Error::InvalidSpec("main_term_low requires beta > 0".into()));
    }
    if variant == Variant::A && gamma > 1.0 {
        return Err(Error::InvalidSpec(format!(
            "low regime of variant A requires gamma <= 1, got {gamma}"
        )));
    }
    let cb = c_beta(beta)?;
    let label = format!("main_low({variant:?},g={gamma},b={beta})");
    Ok(match variant {
        Variant::A => {
            RadialSymbol::new(
                label,
                move |xi| Ok(cb * tau_integral(xi, gamma, beta, how)?),
            )
        }
        _ => RadialSymbol::new(label, move |xi| {
            Ok(cb * tau_integral(xi * xi, 0.5 * gamma, beta, how)?)
        }),
    })
}

/// Main term for variant A with `1 < γ ≤ 2`, including the first-order
/// correction `−λ·C_β ∫₀^{γ−1} τ^β |ξ|^{γ−1−τ} dτ`.
pub fn main_term_high(spec: &DissipationSpec) -> Result<RadialSymbol> {
    main_term_high_with(spec, Evaluation::Quadrature)
}

pub fn main_term_high_with(spec: &DissipationSpec, how: Evaluation) -> Result<RadialSymbol> {
    check_variant(spec, &[Variant::A], "main_term_high")?;
    let DissipationSpec {
        gamma,
        beta,
        lambda,
        ..
    } = *spec;
    if !(beta > 0.0) {
        return Err(Error::InvalidSpec(
            "main_term_high requires beta > 0".into(),
        ));
    }
    if !(gamma > 1.0) {
        return Err(Error::InvalidSpec(format!(
            "high regime requires gamma > 1, got {gamma}"
        )));
    }
    let cb = c_beta(beta)?;
    Ok(RadialSymbol::new(
        format!("main_high(g={gamma},b={beta},l={lambda})"),
        move |xi| {
            if xi == 0.0 {
                return Ok(0.0);
            }
            let lead = tau_integral(xi, gamma, beta, how)?;
            let corr = tau_integral(xi, gamma - 1.0, beta + 1.0, how)?;
            Ok(cb * (lead - lambda * corr))
        },
    ))
}

/// `C_β ∫₀^{γ−1} τ^β |ξ|^{γ−1−τ} dτ`, the coefficient of `−λ` in the high-regime main term.
pub fn high_correction(spec: &DissipationSpec, how: Evaluation) -> Result<RadialSymbol> {
    check_variant(spec, &[Variant::A], "high_correction")?;
    let DissipationSpec { gamma, beta, .. } = *spec;
    let cb = c_beta(beta)?;
    Ok(RadialSymbol::new(
        format!("corr(g={gamma},b={beta})"),
        move |xi| Ok(cb * tau_integral(xi, gamma - 1.0, beta + 1.0, how)?),
    ))
}

pub fn regime(spec: &DissipationSpec) -> Regime {
    if spec.variant == Variant::A && spec.gamma > 1.0 && spec.beta > 0.0 {
        Regime::High
    } else {
        Regime::Low
    }
}

/// Splits the full symbol into main term and residual.
///
/// Degenerate cases: for `β = 0` or variant FRACTIONAL the main term is the
/// full symbol and the residual vanishes; for variant NONE (the identity)
/// there is no fractional part, so the main term vanishes and the residual
/// is the constant 1.
pub fn decompose(spec: &DissipationSpec, how: Evaluation) -> Result<DecompositionResult> {
    spec.validate()?;
    let full = full_symbol(spec)?;
    let cb = if spec.is_degenerate() {
        0.0
    } else {
        c_beta(spec.beta)?
    };
    let (main, regime) = match spec.variant {
        Variant::None => (RadialSymbol::constant(0.0), Regime::Low),
        _ if spec.is_degenerate() => (full.clone(), Regime::Low),
        _ => match regime(spec) {
            Regime::Low => (main_term_low_with(spec, how)?, Regime::Low),
            Regime::High => (main_term_high_with(spec, how)?, Regime::High),
        },
    };
    let residual = if spec.is_degenerate() && spec.variant != Variant::None {
        RadialSymbol::constant(0.0)
    } else {
        let (f, m) = (full.clone(), main.clone());
        RadialSymbol::new(format!("P[{}]", full.label()), move |xi| {
            Ok(f.eval(xi)? - m.eval(xi)?)
        })
    };
    Ok(DecompositionResult {
        main,
        residual,
        regime,
        c_beta: cb,
    })
}

/// Residual `P = full − main` with the main term evaluated by quadrature.
pub fn residual_symbol(spec: &DissipationSpec) -> Result<RadialSymbol> {
    Ok(decompose(spec, Evaluation::Quadrature)?.residual)
}

pub fn residual_symbol_with(spec: &DissipationSpec, how: Evaluation) -> Result<RadialSymbol> {
    Ok(decompose(spec, how)?.residual)
}

/// Residual assembled from its three explicit pieces for the low regime:
///
/// * `C_β ∫₀^γ τ^{β−1} ((λ+|ξ|)^{γ−τ} − |ξ|^{γ−τ}) dτ`
/// * `C_β ∫_γ^∞ τ^{β−1} (λ+|ξ|)^{γ−τ} dτ`
/// * `(|ξ|^γ − (λ+|ξ|)^γ) / log^β(λ+|ξ|)`
///
/// Variant A1 uses the same pieces in the variable `|ξ|²` with `γ/2`.
pub fn residual_three_term(spec: &DissipationSpec) -> Result<RadialSymbol> {
    check_variant(spec, &[Variant::A, Variant::A1], "residual_three_term")?;
    let DissipationSpec {
        variant,
        gamma,
        beta,
        lambda,
        ..
    } = *spec;
    if !(beta > 0.0) {
        return Err(Error::InvalidSpec(
            "residual_three_term requires beta > 0".into(),
        ));
    }
    if variant == Variant::A && gamma > 1.0 {
        return Err(Error::InvalidSpec(format!(
            "three-term residual requires gamma <= 1, got {gamma}"
        )));
    }
    let cb = c_beta(beta)?;
    Ok(RadialSymbol::new(
        format!("P3({variant:?},g={gamma},b={beta},l={lambda})"),
        move |xi| {
            let (x, g) = match variant {
                Variant::A => (xi, gamma),
                _ => (xi * xi, 0.5 * gamma),
            };
            let pieces = three_term_pieces(x, g, beta, lambda, cb)?;
            Ok(pieces.iter().sum())
        },
    ))
}

/// The three pieces of the low-regime residual at `x = |ξ|` (variant A form).
pub fn three_term_pieces(x: f64, g: f64, beta: f64, lambda: f64, cb: f64) -> Result<[f64; 3]> {
    let c = (lambda + x).ln();
    let diff = |t: f64| {
        let e = g - t;
        if x == 0.0 {
            lambda.powf(e)
        } else {
            x.powf(e) * (e * (lambda / x).ln_1p()).exp_m1()
        }
    };
    let a = if g == 0.0 {
        0.0
    } else {
        cb * integrate_power_weight(diff, beta, g, tol())?.value
    };
    let b = cb * integrate_power_exponential_tail(beta, g, c, tol())?.value;
    let cc = (power(x, g) - (lambda + x).powf(g)) / c.powf(beta);
    Ok([a, b, cc])
}

/// Relative error of `Γ(β)^{−1} ∫₀^∞ τ^{β−1}(λ+|ξ|)^{−τ} dτ` against `log^{−β}(λ+|ξ|)`.
pub fn verify_log_identity(beta: f64, lambda: f64, xi_norm: f64) -> Result<f64> {
    if !(beta > 0.0) || !(lambda > 1.0) || !(xi_norm >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "log identity requires beta > 0, lambda > 1, |xi| >= 0 (got {beta}, {lambda}, {xi_norm})"
        )));
    }
    let c = (lambda + xi_norm).ln();
    let quad = integrate_power_exponential_tail(beta, 0.0, c, tol())?.value / gamma_fn(beta)?;
    let exact = c.powf(-beta);
    Ok((quad - exact).abs() / exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn validation() {
        assert!(DissipationSpec::a(2.5, 1.0, 2.0).is_err());
        assert!(DissipationSpec::a(1.0, -1.0, 2.0).is_err());
        assert!(DissipationSpec::a(1.0, 1.0, 1.0).is_err());
        assert!(DissipationSpec::new(Variant::A, 1.0, 1.0, 2.0, -0.1).is_err());
        assert!(DissipationSpec::new(Variant::None, 9.0, -3.0, 0.0, 0.5).is_ok());
        assert!(DissipationSpec::new(Variant::Fractional, 1.5, -3.0, 0.0, 0.5).is_ok());
    }

    #[test]
    fn serde_names() {
        let s = DissipationSpec::new(Variant::A1, 1.0, 1.0, 2.0, 0.1).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.contains("\"A1\""));
        let v: Variant = serde_json::from_str("\"FRACTIONAL\"").unwrap();
        assert_eq!(v, Variant::Fractional);
        let v: Variant = serde_json::from_str("\"NONE\"").unwrap();
        assert_eq!(v, Variant::None);
    }

    #[test]
    fn symbol_examples() {
        let s = DissipationSpec::a(1.0, 1.0, 2.0).unwrap();
        let m = symbol_a(&s).unwrap();
        let xi = E * E - 2.0;
        assert!(rel(m.eval(xi).unwrap(), 2.694_528_049_465_325_113_6) < 1e-14);
        assert_eq!(m.eval(0.0).unwrap(), 0.0);
        let s1 = DissipationSpec::new(Variant::A1, 1.0, 1.0, 2.0, 1.0).unwrap();
        let m1 = symbol_a1(&s1).unwrap();
        assert!(rel(m1.eval(xi.sqrt()).unwrap(), 1.160_717_030_431_044_617_6) < 1e-14);
        let s0 = DissipationSpec::a(0.0, 0.0, 2.0).unwrap();
        assert_eq!(symbol_a(&s0).unwrap().eval(7.0).unwrap(), 1.0);
        let s00 = DissipationSpec::a(0.0, 2.0, 3.0).unwrap();
        assert!(
            rel(
                symbol_a(&s00).unwrap().eval(0.0).unwrap(),
                3.0_f64.ln().powi(-2)
            ) < 1e-15
        );
        let f = symbol_fractional(0.5).unwrap();
        assert!(rel(f.eval(2.0).unwrap(), std::f64::consts::SQRT_2) < 1e-15);
        assert_eq!(symbol_fractional(2.0).unwrap().eval(3.0).unwrap(), 9.0);
        assert!(symbol_fractional(2.5).is_err());
    }

    #[test]
    fn a1_without_log_is_fractional() {
        let s = DissipationSpec::new(Variant::A1, 1.3, 0.0, 2.0, 1.0).unwrap();
        let a = symbol_a1(&s).unwrap();
        let f = symbol_fractional(1.3).unwrap();
        for xi in [0.0, 0.1, 1.0, 17.0] {
            assert_eq!(a.eval(xi).unwrap(), f.eval(xi).unwrap());
        }
    }

    // 40-digit reference values of C_β ∫₀^γ τ^{β−1}|ξ|^{γ−τ} dτ.
    const LOW_REFERENCE: [(f64, f64, f64, f64); 6] = [
        (0.01, 0.6, 0.4, 0.186_481_036_984_824_530_31),
        (3.7, 0.6, 0.4, 1.649_435_669_433_258_104),
        (250.0, 0.6, 0.4, 13.769_079_904_060_075_608),
        (1.0, 0.3, 2.5, 0.014_832_929_357_690_479_885),
        (0.5, 1.0, 1.0, 0.721_347_520_444_481_703_68),
        (1e5, 0.75, 2.0, 42.352_972_017_398_679_838),
    ];

    // (|ξ|, γ, β, λ, value) for the high-regime main term.
    const HIGH_REFERENCE: [(f64, f64, f64, f64, f64); 5] = [
        (0.01, 1.5, 0.5, 2.0, -0.014_879_566_881_330_264_367),
        (3.7, 1.5, 0.5, 2.0, 5.575_480_417_156_820_817_5),
        (250.0, 1.8, 2.0, 1.5, 677.926_318_143_275_945_39),
        (1.0, 2.0, 1.0, 2.0, 1.0),
        (0.3, 1.2, 3.0, 4.0, 0.207_295_732_555_983_380_89),
    ];

    #[test]
    fn main_low_matches_reference_both_routes() {
        for (xi, g, b, want) in LOW_REFERENCE {
            let s = DissipationSpec::a(g, b, 2.0).unwrap();
            for how in [Evaluation::Quadrature, Evaluation::ClosedForm] {
                let got = main_term_low_with(&s, how).unwrap().eval(xi).unwrap();
                assert!(rel(got, want) < 1e-11, "{how:?} xi={xi}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn main_high_matches_reference_both_routes() {
        for (xi, g, b, l, want) in HIGH_REFERENCE {
            let s = DissipationSpec::a(g, b, l).unwrap();
            for how in [Evaluation::Quadrature, Evaluation::ClosedForm] {
                let got = main_term_high_with(&s, how).unwrap().eval(xi).unwrap();
                assert!(rel(got, want) < 1e-11, "{how:?} xi={xi}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn main_low_simple_values() {
        let s = DissipationSpec::a(1.0, 1.0, 2.0).unwrap();
        let m = main_term_low(&s).unwrap();
        assert!(rel(m.eval(E).unwrap(), E - 1.0) < 1e-12);
        assert!(rel(m.eval(1.0).unwrap(), 1.0) < 1e-12);
        assert_eq!(m.eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn main_high_lambda_linearity() {
        let s2 = DissipationSpec::a(1.7, 0.8, 2.0).unwrap();
        let s4 = DissipationSpec::a(1.7, 0.8, 4.0).unwrap();
        let corr = high_correction(&s2, Evaluation::Quadrature).unwrap();
        for xi in [0.2, 1.0, 5.0] {
            let d = main_term_high(&s4).unwrap().eval(xi).unwrap()
                - main_term_high(&s2).unwrap().eval(xi).unwrap();
            assert!((d + 2.0 * corr.eval(xi).unwrap()).abs() < 1e-11 * d.abs().max(1.0));
        }
    }

    #[test]
    fn residual_at_e() {
        let s = DissipationSpec::a(1.0, 1.0, 2.0).unwrap();
        let p = residual_symbol(&s).unwrap();
        assert!(rel(p.eval(E).unwrap(), 0.033_815_300_139_053_379_914) < 1e-10);
    }

    #[test]
    fn degenerate_decompositions() {
        let s = DissipationSpec::a(0.7, 0.0, 2.0).unwrap();
        let d = decompose(&s, Evaluation::Quadrature).unwrap();
        assert_eq!(d.residual.eval(3.0).unwrap(), 0.0);
        assert_eq!(d.main.eval(3.0).unwrap(), 3.0_f64.powf(0.7));
        let g0 = DissipationSpec::a(0.0, 1.5, 2.0).unwrap();
        let d = decompose(&g0, Evaluation::Quadrature).unwrap();
        assert_eq!(d.main.eval(3.0).unwrap(), 0.0);
        assert_eq!(
            d.residual.eval(3.0).unwrap(),
            symbol_a(&g0).unwrap().eval(3.0).unwrap()
        );
        let none = DissipationSpec::new(Variant::None, 0.0, 0.0, 2.0, 1.0).unwrap();
        let d = decompose(&none, Evaluation::Quadrature).unwrap();
        assert_eq!(d.residual.eval(4.0).unwrap(), 1.0);
    }

    #[test]
    fn three_term_at_origin() {
        let cb = 1.0;
        let [a, b, c] = three_term_pieces(0.0, 1.0, 1.0, 2.0, cb).unwrap();
        let inv = 1.0 / 2.0_f64.ln();
        assert!(rel(a, inv) < 1e-12);
        assert!(rel(b, inv) < 1e-12);
        assert!(rel(c, -2.0 * inv) < 1e-14);
    }

    #[test]
    fn three_term_gamma_zero_is_log_identity() {
        let s = DissipationSpec::a(0.0, 1.7, 3.0).unwrap();
        let p = residual_three_term(&s).unwrap();
        for xi in [0.0, 0.5, 40.0] {
            assert!(rel(p.eval(xi).unwrap(), (3.0 + xi).ln().powf(-1.7)) < 1e-10);
        }
    }

    #[test]
    fn log_identity_examples() {
        assert!(verify_log_identity(1.0, 2.0, 3.0).unwrap() < 1e-12);
        let c = 2.0_f64.ln();
        let quad = integrate_power_exponential_tail(2.0, 0.0, c, tol())
            .unwrap()
            .value;
        assert!(rel(quad, 2.081_368_981_005_607_797_9) < 1e-12);
    }
}
