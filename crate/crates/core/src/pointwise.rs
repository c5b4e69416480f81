//! Pointwise and integral forms of fractional operators.
//!
//! Singular-integral evaluation of `|∇|^s` with the constant
//! `C_{s,d} = s·Γ((d+s)/2) / (2^{2−s}·Γ((2−s)/2)·π^{d/2})`, sign checks at
//! maximum points, lower bounds for the mixed operator
//! `|∇|^{s₂} − c₁|∇|^{s₁}`, and the `L^p` dissipation functional.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{apply_multiplier, RadialSymbol, SpectralField};
use crate::quadrature::{integrate_pieces, Tolerance};
use crate::special::{gamma_fn, hurwitz_zeta};
use crate::symbols::symbol_fractional;

/// Calibrated `Ĉ_d` of the mixed max-point bound, indexed by `d − 1`.
///
/// Generated by `cargo run --release --example calibrate`.
pub const MIXED_BOUND_CONSTANT: [f64; 2] = [2.27, 1.86];
/// Calibrated `Ĉ'_d` of the bound specialised to `s₁ = s₂ − 1`, indexed by `d − 1`.
pub const MIXED_BOUND_CONSTANT_UNIT_GAP: [f64; 2] = [0.434, 0.457];

pub fn frac_constant(s: f64, d: usize) -> Result<f64> {
    if !(s > 0.0 && s < 2.0) {
        return Err(Error::InvalidArgument(format!(
            "fractional order must lie in (0, 2), got {s}"
        )));
    }
    if d != 1 && d != 2 {
        return Err(Error::InvalidArgument(format!(
            "dimension must be 1 or 2, got {d}"
        )));
    }
    let d = d as f64;
    Ok(s * gamma_fn(0.5 * (d + s))?
        / (2f64.powf(2.0 - s) * gamma_fn(0.5 * (2.0 - s))? * PI.powf(0.5 * d)))
}

/// The normalization `2^s·Γ((d+s)/2) / (π^{d/2}·|Γ(−s/2)|)` for which the
/// singular integral reproduces the multiplier `|ξ|^s` exactly.
pub fn frac_constant_standard(s: f64, d: usize) -> Result<f64> {
    frac_constant(s, d)?;
    let d = d as f64;
    Ok(2f64.powf(s) * gamma_fn(0.5 * (d + s))? / (PI.powf(0.5 * d) * gamma_fn(-0.5 * s)?.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularIntegral {
    /// Extrapolated `C·∫_{|y−x₀|>0}(f(x₀)−f(y))/|x₀−y|^{1+s} dy`.
    pub value: f64,
    /// Difference between extrapolants from `(ε, ε/2, ε/4)` and `(ε/2, ε/4, ε/8)`.
    pub extrapolation_gap: f64,
}

/// Settings for [`frac_laplacian_quadrature_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularQuadrature {
    /// Multiplies the normalization constant (1 for the faithful operator).
    pub constant_scale: f64,
    /// Truncation radius of the explicit integral in units of the period.
    pub cutoff_periods: f64,
    /// Largest acceptable gap between successive extrapolants, relative to `max|f|`.
    pub extrapolation_tolerance: f64,
}

impl Default for SingularQuadrature {
    fn default() -> Self {
        Self {
            constant_scale: 1.0,
            cutoff_periods: 16.0,
            extrapolation_tolerance: 1e-7,
        }
    }
}

/// `C_{s,1}·lim_{ε→0} ∫_{|y−x₀|>ε} (f(x₀) − f(y))/|x₀ − y|^{1+s} dy` for a
/// 1D periodic band-limited `f`, treated as a function on the whole line.
pub fn frac_laplacian_quadrature(f: &SpectralField, x0: f64, s: f64, eps: f64) -> Result<f64> {
    Ok(frac_laplacian_quadrature_with(f, x0, s, eps, SingularQuadrature::default())?.value)
}

/// Symmetric pairing `g(r) = 2f(x₀) − f(x₀+r) − f(x₀−r)` removes the odd
/// part of the singularity, so `g(r) = O(r²)` and the same formula serves
/// `s < 1` and the principal value for `s ≥ 1`. The integral over
/// `[ε, R_c]` is evaluated adaptively; beyond `R_c` the mean part is exact and
/// the oscillating part is integrated by parts repeatedly. The missing piece
/// `∫₀^ε` behaves like `a·ε^{2−s} + b·ε^{4−s}`, which Richardson
/// extrapolation over `ε, …, ε/8` removes.
pub fn frac_laplacian_quadrature_with(
    f: &SpectralField,
    x0: f64,
    s: f64,
    eps: f64,
    opts: SingularQuadrature,
) -> Result<SingularIntegral> {
    let grid = *f.grid();
    if grid.dim != 1 {
        return Err(Error::InvalidArgument(
            "singular quadrature is implemented for d = 1".into(),
        ));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let constant = frac_constant(s, 1)? * opts.constant_scale;
    let interp = f.interpolant();
    let f0 = interp.value(&[x0]);
    let g = |r: f64| 2.0 * f0 - interp.value(&[x0 + r]) - interp.value(&[x0 - r]);
    let integrand = |r: f64| g(r) * r.powf(-1.0 - s);

    let period = 2.0 * grid.half_width;
    let cutoff = opts.cutoff_periods * period;
    // Pieces no longer than a tenth of the shortest wavelength present.
    let spectral = f.spectral();
    let top = (0..grid.n)
        .filter(|&j| spectral[j].norm() > 0.0)
        .map(|j| grid.signed_index(j).unsigned_abs())
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let piece = (period / top) / 10.0;

    let tol = Tolerance::new(1e-15 * f.max_abs().max(1e-300), 1e-13);
    let body = |e: f64| -> Result<f64> {
        let mut points = vec![e];
        let mut x = piece.max(e);
        while x < cutoff {
            points.push(x);
            x += piece;
        }
        points.push(cutoff);
        Ok(integrate_pieces(integrand, &points, tol)?.value)
    };

    // Tail beyond the cutoff. With q(r) = g(r) − 2(f(x₀) − f̄) mean-free and
    // H_j its j-th mean-free antiderivative, repeated integration by parts gives
    // ∫_{R_c}^∞ q·r^{−1−s} = Σ_j (−1)^j H_j(R_c)·u_j(R_c), u_j = (r^{−1−s})^{(j−1)}.
    const TAIL_TERMS: usize = 8;
    let n = grid.n as f64;
    let mut mean = 0.0;
    let mut antiderivatives = [0.0; TAIL_TERMS];
    for (j, c) in spectral.iter().enumerate() {
        let k = grid.signed_index(j);
        let c = c / n;
        if k == 0 {
            mean = c.re;
            continue;
        }
        let xi = k as f64 * grid.freq_step;
        // Pairing e^{±iξr} turns c·e^{iξ(x₀+R)} into 2·Re(c e^{iφ})·cos(ξr).
        let phase = xi * (x0 + grid.half_width);
        let a = 2.0 * (c.re * phase.cos() - c.im * phase.sin());
        let (sn, cs) = (xi * cutoff).sin_cos();
        // Re(e^{iξr}·(−i)^j) / ξ^j cycles through sin, −cos, −sin, cos.
        let mut scale = 1.0;
        for (m, h) in antiderivatives.iter_mut().enumerate() {
            scale /= xi;
            let trig = match m % 4 {
                0 => sn,
                1 => -cs,
                2 => -sn,
                _ => cs,
            };
            *h += a * trig * scale;
        }
    }
    let mut oscillating = 0.0;
    let mut u = cutoff.powf(-1.0 - s);
    for (m, h) in antiderivatives.iter().enumerate() {
        let j = m + 1;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        oscillating += sign * h * u;
        u *= -(s + j as f64) / cutoff;
    }
    let tail = 2.0 * (f0 - mean) * cutoff.powf(-s) / s - oscillating;

    let levels: Vec<f64> = (0..4)
        .map(|j| Ok(body(eps / f64::from(1u32 << j))? + tail))
        .collect::<Result<_>>()?;
    // Eliminates a·ε^{2−s} and b·ε^{4−s} from three consecutive levels.
    let extrapolate = |i: &[f64]| {
        let p = 2f64.powf(2.0 - s);
        let q = 2f64.powf(4.0 - s);
        let r01 = (p * i[1] - i[0]) / (p - 1.0);
        let r12 = (p * i[2] - i[1]) / (p - 1.0);
        (q * r12 - r01) / (q - 1.0)
    };
    let coarse = extrapolate(&levels[0..3]);
    let two_term = extrapolate(&levels[1..4]);
    let gap = (two_term - coarse).abs();
    let scale = f.max_abs().max(f64::MIN_POSITIVE);
    if gap > opts.extrapolation_tolerance * scale {
        return Err(Error::ExtrapolationNonConvergence {
            previous: constant * coarse,
            current: constant * two_term,
        });
    }
    Ok(SingularIntegral {
        value: constant * two_term,
        extrapolation_gap: constant * gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedOperatorSpec {
    pub s1: f64,
    pub s2: f64,
    pub c1: f64,
}

impl MixedOperatorSpec {
    pub fn new(s1: f64, s2: f64, c1: f64) -> Result<Self> {
        if !(0.0 < s1 && s1 < s2 && s2 < 2.0) {
            return Err(Error::InvalidArgument(format!(
                "mixed operator requires 0 < s1 < s2 < 2, got {s1}, {s2}"
            )));
        }
        if !(c1 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "mixed operator requires c1 > 0, got {c1}"
            )));
        }
        Ok(Self { s1, s2, c1 })
    }

    /// `|ξ|^{s₂} − c₁|ξ|^{s₁}`
    pub fn symbol(&self) -> RadialSymbol {
        let Self { s1, s2, c1 } = *self;
        RadialSymbol::from_fn(format!("|xi|^{s2}-{c1}|xi|^{s1}"), move |xi| {
            if xi == 0.0 {
                0.0
            } else {
                xi.powf(s2) - c1 * xi.powf(s1)
            }
        })
    }

    /// `(2−s₁)·(1 + (s₂(2−s₂))^{−s₁/(s₂−s₁)})`
    pub fn shape_factor(&self) -> f64 {
        let Self { s1, s2, .. } = *self;
        (2.0 - s1) * (1.0 + (s2 * (2.0 - s2)).powf(-s1 / (s2 - s1)))
    }

    /// `1 + (2−s₂)^{1−s₂}`, the shape of the bound when `s₁ = s₂ − 1`.
    pub fn unit_gap_shape_factor(&self) -> f64 {
        1.0 + (2.0 - self.s2).powf(1.0 - self.s2)
    }

    pub fn is_unit_gap(&self) -> bool {
        (self.s2 - self.s1 - 1.0).abs() < 1e-12 && self.s2 > 1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxPointResult {
    /// Grid argmax (flat index, lowest index on ties).
    pub grid_index: usize,
    /// Newton-refined location of the maximum.
    pub location: Vec<f64>,
    /// Largest grid sample.
    pub value_at_max: f64,
    /// Interpolant value at the refined location.
    pub refined_value: f64,
    pub operator_value: f64,
    pub bound_rhs: Option<f64>,
}

fn evaluate_at_max(f: &SpectralField, m: &RadialSymbol) -> Result<MaxPointResult> {
    let grid_index = f.argmax();
    let interp = f.interpolant();
    let location = interp.refine_max(&f.point(grid_index), f.grid().dx());
    let refined_value = interp.value(&location);
    let applied = apply_multiplier(f, m)?;
    let operator_value = applied.interpolant().value(&location);
    Ok(MaxPointResult {
        grid_index,
        location,
        value_at_max: f.physical()[grid_index],
        refined_value,
        operator_value,
        bound_rhs: None,
    })
}

/// Spectral `|∇|^s f` at the refined maximum of `f`.
pub fn maxpoint_sign_check(f: &SpectralField, s: f64) -> Result<MaxPointResult> {
    if !(s > 0.0 && s < 2.0) {
        return Err(Error::InvalidArgument(format!(
            "fractional order must lie in (0, 2), got {s}"
        )));
    }
    evaluate_at_max(f, &symbol_fractional(s)?)
}

/// `L f` at the refined maximum of `f`, with the lower bound
/// `−c₁·Ĉ·max|f|·shape`, where the unit-gap form is used when `s₁ = s₂ − 1`.
pub fn mixed_maxpoint_bound(f: &SpectralField, op: &MixedOperatorSpec) -> Result<MaxPointResult> {
    let d = f.grid().dim;
    let constant = if op.is_unit_gap() {
        MIXED_BOUND_CONSTANT_UNIT_GAP[d - 1]
    } else {
        MIXED_BOUND_CONSTANT[d - 1]
    };
    mixed_maxpoint_bound_with(f, op, constant)
}

pub fn mixed_maxpoint_bound_with(
    f: &SpectralField,
    op: &MixedOperatorSpec,
    constant: f64,
) -> Result<MaxPointResult> {
    let mut r = evaluate_at_max(f, &op.symbol())?;
    let shape = if op.is_unit_gap() {
        op.unit_gap_shape_factor()
    } else {
        op.shape_factor()
    };
    r.bound_rhs = Some(-op.c1 * constant * f.max_abs() * shape);
    Ok(r)
}

/// Violation ratio `max(0, −(Lf)(x₀)) / (c₁·max|f|·shape)`: the smallest
/// constant for which the bound holds on this sample.
pub fn mixed_violation_ratio(
    f: &SpectralField,
    op: &MixedOperatorSpec,
    unit_gap: bool,
) -> Result<f64> {
    let r = evaluate_at_max(f, &op.symbol())?;
    let shape = if unit_gap {
        op.unit_gap_shape_factor()
    } else {
        op.shape_factor()
    };
    Ok((-r.operator_value).max(0.0) / (op.c1 * f.max_abs() * shape))
}

fn signed_power(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.abs().powf(p - 1.0) * x.signum()
    }
}

/// `∫ (T_m θ)·|θ|^{p−1}·sgn(θ) dx` on the grid, with `sgn(0) = 0`.
pub fn lp_dissipation_functional(theta: &SpectralField, m: &RadialSymbol, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "p must be a finite number >= 1, got {p}"
        )));
    }
    let applied = apply_multiplier(theta, m)?;
    let cell = theta.grid().cell_volume;
    Ok(applied
        .physical()
        .iter()
        .zip(theta.physical())
        .map(|(t, th)| t * signed_power(*th, p))
        .sum::<f64>()
        * cell)
}

/// `Σ_m |d + mL|^{−σ}` over all integers `m`, for `0 < d < L`.
fn periodized_power(d: f64, period: f64, sigma: f64) -> Result<f64> {
    let a = d / period;
    Ok(period.powf(-sigma) * (hurwitz_zeta(sigma, a)? + hurwitz_zeta(sigma, 1.0 - a)?))
}

fn h(a: f64, b: f64, p: f64) -> f64 {
    (a - b) * (signed_power(a, p) - signed_power(b, p))
}

/// Double-sum evaluation of `(C_{s,1}/2)·∬ h(x,y)/|x−y|^{1+s} dx dy` with
/// `h(x,y) = (g(x)−g(y))(|g(x)|^{p−1}sgn g(x) − |g(y)|^{p−1}sgn g(y))`.
///
/// The kernel is the fully periodized `Σ_m |x−y+2Rm|^{−1−s}` (the whole-line
/// operator restricted to periodic functions); the diagonal is excluded.
pub fn symmetrized_form_oracle(g: &SpectralField, s: f64, p: f64) -> Result<f64> {
    symmetrized_form_oracle_with(g, s, p, 1.0)
}

pub fn symmetrized_form_oracle_with(
    g: &SpectralField,
    s: f64,
    p: f64,
    constant_scale: f64,
) -> Result<f64> {
    let grid = *g.grid();
    if grid.dim != 1 || grid.n > 256 {
        return Err(Error::InvalidArgument(format!(
            "symmetrized oracle needs a 1D grid with n <= 256, got dim {} n {}",
            grid.dim, grid.n
        )));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "symmetrized oracle requires 0 < s < 1, got {s}"
        )));
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("p must be >= 1, got {p}")));
    }
    let n = grid.n;
    let dx = grid.dx();
    let period = 2.0 * grid.half_width;
    let kernel: Vec<f64> = (1..n)
        .map(|j| periodized_power(j as f64 * dx, period, 1.0 + s))
        .collect::<Result<_>>()?;
    let v = g.physical();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let off = (j + n - i) % n;
                sum += h(v[i], v[j], p) * kernel[off - 1];
            }
        }
    }
    Ok(0.5 * constant_scale * frac_constant(s, 1)? * sum * dx * dx)
}

/// Tail of the symmetrized form with the lower-order exponent:
/// `Σ_{|x−y+2Rm|>A} |g(x)−g(y)|(|g(x)|^{p−1}+|g(y)|^{p−1}) / |x−y+2Rm|^{s}`
/// over all images `m`, for `1 < s < 2`.
pub fn symmetrized_tail_sum(g: &SpectralField, s: f64, p: f64, cutoff: f64) -> Result<f64> {
    let grid = *g.grid();
    if grid.dim != 1 || grid.n > 256 {
        return Err(Error::InvalidArgument(
            "tail sum needs a 1D grid with n <= 256".into(),
        ));
    }
    if !(s > 1.0 && s < 2.0) {
        return Err(Error::InvalidArgument(format!(
            "tail sum requires 1 < s < 2, got {s}"
        )));
    }
    let n = grid.n;
    let dx = grid.dx();
    let period = 2.0 * grid.half_width;
    // Σ over images at distance |d + mL| > A, for offsets d = j·dx ∈ [0, L).
    let image_sum = |d: f64| -> Result<f64> {
        let mut total = 0.0;
        // Images to the right: d + mL, m ≥ 0; to the left: L − d + mL, m ≥ 0.
        for base in [d, period - d] {
            if base == 0.0 {
                continue;
            }
            let first = if base > cutoff {
                0.0
            } else {
                ((cutoff - base) / period).floor() + 1.0
            };
            total += period.powf(-s) * hurwitz_zeta(s, base / period + first)?;
        }
        Ok(total)
    };
    let kernel: Vec<f64> = (0..n)
        .map(|j| image_sum(j as f64 * dx))
        .collect::<Result<_>>()?;
    let v = g.physical();
    let w: Vec<f64> = v.iter().map(|x| x.abs().powf(p - 1.0)).collect();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            let off = (j + n - i) % n;
            sum += (v[i] - v[j]).abs() * (w[i] + w[j]) * kernel[off];
        }
    }
    Ok(sum * dx * dx)
}

/// `‖θ‖_p^p` on the grid.
pub fn lp_norm_pow(theta: &SpectralField, p: f64) -> f64 {
    theta
        .physical()
        .iter()
        .map(|x| x.abs().powf(p))
        .sum::<f64>()
        * theta.grid().cell_volume
}

/// Seeded sample of the calibration suite for the mixed max-point bound.
#[derive(Debug, Clone)]
pub struct CalibrationSample {
    pub op: MixedOperatorSpec,
    pub field: SpectralField,
}

/// Canonical grid of the calibration suite in dimension `d`.
pub fn calibration_grid(dim: usize) -> Result<crate::grid::PeriodicGrid> {
    crate::grid::make_grid(dim, if dim == 1 { 64 } else { 32 }, PI)
}

/// The `index`-th sample: `s₂`, `s₁ < s₂` (or `s₁ = s₂ − 1`), `c₁ ∈ [0.1, 10]`
/// log-uniform, and a random trigonometric polynomial of degree ≤ 10 (1D)
/// or ≤ 6 per axis (2D).
pub fn calibration_sample(
    dim: usize,
    unit_gap: bool,
    master_seed: u64,
    index: u64,
) -> Result<CalibrationSample> {
    use rand::Rng;
    let seed = crate::random::derive_seed(master_seed, index);
    let mut r = crate::random::rng(seed);
    let (s1, s2) = if unit_gap {
        let s2 = r.random_range(1.05..1.95);
        (s2 - 1.0, s2)
    } else {
        let s2: f64 = r.random_range(0.05..1.95);
        (s2 * r.random_range(0.05..0.95), s2)
    };
    let c1 = 10f64.powf(r.random_range(-1.0..1.0));
    let max_degree = if dim == 1 { 10 } else { 6 };
    let degree = r.random_range(1..=max_degree);
    let grid = calibration_grid(dim)?;
    let field = crate::random::random_trig_polynomial(&grid, degree, seed ^ 0x5eed)?;
    Ok(CalibrationSample {
        op: MixedOperatorSpec::new(s1, s2, c1)?,
        field,
    })
}

/// Largest violation ratio over `samples` seeded samples, the smallest
/// constant for which the mixed bound holds on the whole suite.
pub fn calibrate_mixed_constant(
    dim: usize,
    unit_gap: bool,
    samples: u64,
    master_seed: u64,
) -> Result<f64> {
    use rayon::prelude::*;
    let ratios = (0..samples)
        .into_par_iter()
        .map(|i| {
            let c = calibration_sample(dim, unit_gap, master_seed, i)?;
            mixed_violation_ratio(&c.field, &c.op, unit_gap)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

/// Master seed of the stored calibration.
pub const CALIBRATION_SEED: u64 = 20_240_601;
/// Size of the stored calibration suite.
pub const CALIBRATION_SAMPLES: u64 = 1000;
