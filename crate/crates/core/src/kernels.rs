//! Real-space convolution kernels of radial multipliers.
//!
//! Whole-space kernels are approximated on a large torus. Their `L¹` norms are
//! certified by doubling the domain and the point count together (keeping the
//! resolution `dx` and the band limit fixed) until the estimate settles.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{inverse_in_place, PeriodicGrid, RadialSymbol, RadialTable};
use crate::symbols::{full_symbol, DissipationSpec};

/// Relative change below which two refinement levels count as converged.
pub const L1_CONVERGENCE: f64 = 0.01;
/// Relative floor for calling a kernel sample negative.
pub const POSITIVITY_TOLERANCE: f64 = 1e-9;
/// Allowed growth of `sup|m|` beyond the band limit before the symbol is
/// declared unbounded on the refined lattice.
pub const BOUNDEDNESS_SLACK: f64 = 1.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementLevel {
    pub half_width: f64,
    pub n: usize,
    pub l1_estimate: f64,
}

#[derive(Debug, Clone)]
pub struct RealKernel {
    pub grid: PeriodicGrid,
    /// Samples at the grid points `−R + j·dx` (row-major in 2D).
    pub samples: Vec<f64>,
    pub l1_estimate: f64,
    pub min_value: f64,
    pub max_abs: f64,
    /// `Σ K·cell_volume`, equal to `m(0)` for a finite symbol.
    pub mass: f64,
    pub imaginary_residue: f64,
    pub converged: bool,
    pub history: Vec<RefinementLevel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L1Certificate {
    pub estimate: f64,
    pub converged: bool,
    /// Whether `sup|m|` stays flat beyond the band limit of the base grid.
    pub symbol_bounded: bool,
}

fn fftshift(grid: &PeriodicGrid, values: &[Complex64]) -> Vec<Complex64> {
    let n = grid.n;
    let h = n / 2;
    match grid.dim {
        1 => (0..n).map(|j| values[(j + h) % n]).collect(),
        _ => {
            let mut out = Vec::with_capacity(n * n);
            for i in 0..n {
                let row = (i + h) % n;
                for j in 0..n {
                    out.push(values[row * n + (j + h) % n]);
                }
            }
            out
        }
    }
}

struct KernelStats {
    l1: f64,
    mass: f64,
    min_value: f64,
    max_abs: f64,
    imaginary_residue: f64,
}

fn inverse_of_table(table: &RadialTable) -> Vec<Complex64> {
    let grid = &table.grid;
    let mut buf: Vec<Complex64> = grid
        .radial_keys()
        .map(|k| Complex64::new(table.values[k], 0.0))
        .collect();
    inverse_in_place(grid, &mut buf);
    buf
}

// Statistics of the kernel `ifft/cell` without materializing a shifted copy.
fn stats(grid: &PeriodicGrid, buf: &[Complex64]) -> KernelStats {
    let scale = 1.0 / grid.cell_volume;
    let mut l1 = 0.0;
    let mut mass = 0.0;
    let mut min_value = f64::INFINITY;
    let mut max_abs: f64 = 0.0;
    let mut max_im: f64 = 0.0;
    for z in buf {
        let k = z.re * scale;
        l1 += k.abs();
        mass += k;
        min_value = min_value.min(k);
        max_abs = max_abs.max(k.abs());
        max_im = max_im.max(z.im.abs() * scale);
    }
    KernelStats {
        l1: l1 * grid.cell_volume,
        mass: mass * grid.cell_volume,
        min_value,
        max_abs,
        imaginary_residue: if max_abs > 0.0 {
            max_im / max_abs
        } else {
            max_im
        },
    }
}

fn kernel_from_table(table: &RadialTable) -> RealKernel {
    let grid = table.grid;
    let buf = inverse_of_table(table);
    let st = stats(&grid, &buf);
    let scale = 1.0 / grid.cell_volume;
    let samples = fftshift(&grid, &buf)
        .into_iter()
        .map(|z| z.re * scale)
        .collect();
    RealKernel {
        grid,
        samples,
        l1_estimate: st.l1,
        min_value: st.min_value,
        max_abs: st.max_abs,
        mass: st.mass,
        imaginary_residue: st.imaginary_residue,
        converged: false,
        history: vec![RefinementLevel {
            half_width: grid.half_width,
            n: grid.n,
            l1_estimate: st.l1,
        }],
    }
}

/// Inverse transform of `m` sampled on the frequency lattice of `grid`.
///
/// A single level carries no convergence information, so `converged` is false.
pub fn kernel_of_symbol(m: &RadialSymbol, grid: &PeriodicGrid) -> Result<RealKernel> {
    Ok(kernel_from_table(&RadialTable::build(m, grid, None)?))
}

/// Refinement policy for [`l1_norm_certified_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refinement {
    /// Maximum number of `(R, n) → (2R, 2n)` doublings.
    pub max_doublings: usize,
}

impl Refinement {
    /// Defaults sized by dimension: 2D transforms grow fourfold per doubling.
    pub fn for_dim(dim: usize) -> Self {
        Self {
            max_doublings: if dim == 1 { 10 } else { 1 },
        }
    }
}

/// Certified `L¹` estimate with the default refinement policy.
pub fn l1_norm_certified(m: &RadialSymbol, base_grid: &PeriodicGrid) -> Result<L1Certificate> {
    Ok(l1_norm_certified_with(m, base_grid, Refinement::for_dim(base_grid.dim))?.0)
}

/// Doubles `(R, n)` until the `L¹` estimate changes by less than 1%, and
/// checks that the symbol does not grow beyond the band limit.
///
/// Doubling `(R, n)` keeps the band limit `Ω` fixed, so a symbol that grows
/// at infinity (and therefore has no integrable kernel) can look converged
/// on the lattice. The boundedness check compares `sup|m|` on `(Ω, 2Ω]` with
/// `sup|m|` on `[0, Ω]`; `‖m‖_∞ ≤ ‖K‖_{L¹}` makes growth a refusal reason.
pub fn l1_norm_certified_with(
    m: &RadialSymbol,
    base_grid: &PeriodicGrid,
    policy: Refinement,
) -> Result<(L1Certificate, Vec<RefinementLevel>)> {
    let mut table = RadialTable::build(m, base_grid, None)?;
    let inside = table.sup_abs();
    let mut estimate = stats(base_grid, &inverse_of_table(&table)).l1;
    let mut history = vec![RefinementLevel {
        half_width: base_grid.half_width,
        n: base_grid.n,
        l1_estimate: estimate,
    }];

    let omega = base_grid.nyquist();
    let probes: Vec<f64> = (1..=512)
        .map(|i| omega * (1.0 + i as f64 / 512.0))
        .collect();
    let outside = probes
        .par_iter()
        .map(|&xi| m.eval(xi).map(f64::abs))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0_f64, f64::max);
    let symbol_bounded = outside <= BOUNDEDNESS_SLACK * inside;

    let mut converged = false;
    for _ in 0..policy.max_doublings {
        let grid = table.grid.doubled()?;
        table = RadialTable::build(m, &grid, Some(&table))?;
        let next = stats(&grid, &inverse_of_table(&table)).l1;
        history.push(RefinementLevel {
            half_width: grid.half_width,
            n: grid.n,
            l1_estimate: next,
        });
        let change = (next - estimate).abs() / next.abs().max(f64::MIN_POSITIVE);
        estimate = next;
        if change < L1_CONVERGENCE {
            converged = true;
            break;
        }
    }
    Ok((
        L1Certificate {
            estimate,
            converged: converged && symbol_bounded,
            symbol_bounded,
        },
        history,
    ))
}

/// Kernel together with its refinement history and convergence flag.
pub fn certified_kernel(m: &RadialSymbol, base_grid: &PeriodicGrid) -> Result<RealKernel> {
    let (cert, history) = l1_norm_certified_with(m, base_grid, Refinement::for_dim(base_grid.dim))?;
    let mut kernel = kernel_of_symbol(m, base_grid)?;
    kernel.converged = cert.converged;
    kernel.history = history;
    Ok(kernel)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub spec: DissipationSpec,
    pub t: f64,
    pub min_value: f64,
    pub max_abs: f64,
    /// `Σ_{K<−tol}|K| / Σ|K|` with `tol = 1e-9·max|K|`.
    pub negative_mass_fraction: f64,
    pub mass: f64,
}

/// Positivity diagnostics of the kernel of `e^{−t·m}`.
pub fn heat_kernel(
    spec: &DissipationSpec,
    t: f64,
    grid: &PeriodicGrid,
) -> Result<PositivityReport> {
    if !(t > 0.0) {
        return Err(crate::Error::InvalidArgument(format!(
            "heat kernel time must be positive, got {t}"
        )));
    }
    let m = full_symbol(spec)?.exp_neg(t);
    let k = kernel_of_symbol(&m, grid)?;
    let tol = POSITIVITY_TOLERANCE * k.max_abs;
    let total: f64 = k.samples.iter().map(|v| v.abs()).sum();
    let negative: f64 = k
        .samples
        .iter()
        .filter(|&&v| v < -tol)
        .map(|v| v.abs())
        .sum();
    Ok(PositivityReport {
        spec: *spec,
        t,
        min_value: k.min_value,
        max_abs: k.max_abs,
        negative_mass_fraction: if total > 0.0 { negative / total } else { 0.0 },
        mass: k.mass,
    })
}

/// [`heat_kernel`] for each spec, in input order; failures are kept per entry.
pub fn positivity_scan(
    specs: &[DissipationSpec],
    t: f64,
    grid: &PeriodicGrid,
) -> Vec<Result<PositivityReport>> {
    specs.par_iter().map(|s| heat_kernel(s, t, grid)).collect()
}

impl PositivityReport {
    pub fn is_positive(&self) -> bool {
        self.min_value >= -POSITIVITY_TOLERANCE * self.max_abs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn identity_symbol_gives_discrete_delta() {
        let g = make_grid(1, 64, 5.0).unwrap();
        let k = kernel_of_symbol(&RadialSymbol::constant(1.0), &g).unwrap();
        assert!((k.l1_estimate - 1.0).abs() < 1e-13);
        let peak = k.samples.iter().position(|&v| v == k.max_abs).unwrap();
        assert_eq!(peak, 32);
        assert!((g.coord(peak)).abs() < 1e-15);
    }

    #[test]
    fn gaussian_pair() {
        let g = make_grid(1, 1024, 40.0).unwrap();
        let k = kernel_of_symbol(
            &RadialSymbol::from_fn("gauss", |xi| (-0.5 * xi * xi).exp()),
            &g,
        )
        .unwrap();
        let inv_sqrt_2pi = 0.398_942_280_401_432_677_94;
        for (j, v) in k.samples.iter().enumerate() {
            let x = g.coord(j);
            assert!((v - inv_sqrt_2pi * (-0.5 * x * x).exp()).abs() < 1e-13);
        }
        assert!(k.min_value >= -1e-9);
        assert!(k.imaginary_residue < 1e-9);
    }

    #[test]
    fn two_dimensional_gaussian_mass() {
        let g = make_grid(2, 64, 10.0).unwrap();
        let k =
            kernel_of_symbol(&RadialSymbol::from_fn("gauss", |xi| (-xi * xi).exp()), &g).unwrap();
        assert!((k.mass - 1.0).abs() < 1e-12);
        let centre = 32 * 64 + 32;
        assert!((k.samples[centre] - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-12);
    }

    #[test]
    fn growing_symbol_is_refused() {
        let g = make_grid(1, 1024, 50.0).unwrap();
        let cert =
            l1_norm_certified(&RadialSymbol::from_fn("sqrt", |xi: f64| xi.sqrt()), &g).unwrap();
        assert!(!cert.symbol_bounded);
        assert!(!cert.converged);
    }

    #[test]
    fn heat_semigroup_is_positive() {
        let g = make_grid(1, 4096, 100.0).unwrap();
        let s = DissipationSpec::a(2.0, 0.0, 2.0).unwrap();
        let r = heat_kernel(&s, 1.0, &g).unwrap();
        assert!(r.is_positive());
        assert_eq!(r.negative_mass_fraction, 0.0);
        assert!((r.mass - 1.0).abs() < 1e-10);
    }
}
