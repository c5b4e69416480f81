//! Uniform periodic grids on `[−R, R)^d`, FFTs and radial Fourier multipliers.
//!
//! Spectral coefficients are the raw (unnormalized) DFT of the samples in
//! natural FFT index order. The continuous Fourier transform of a sampled
//! function is approximated by `cell_volume · DFT` up to a unit-modulus phase
//! coming from the grid origin at `−R`, which cancels in every multiplier.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicGrid {
    pub dim: usize,
    pub n: usize,
    pub half_width: f64,
    pub cell_volume: f64,
    pub freq_step: f64,
}

pub fn make_grid(dim: usize, n: usize, half_width: f64) -> Result<PeriodicGrid> {
    if dim != 1 && dim != 2 {
        return Err(Error::InvalidGrid(format!("dim must be 1 or 2, got {dim}")));
    }
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::InvalidGrid(format!(
            "n must be a power of two >= 8, got {n}"
        )));
    }
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "half_width must be positive, got {half_width}"
        )));
    }
    let dx = 2.0 * half_width / n as f64;
    Ok(PeriodicGrid {
        dim,
        n,
        half_width,
        cell_volume: dx.powi(dim as i32),
        freq_step: std::f64::consts::PI / half_width,
    })
}

impl PeriodicGrid {
    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Total number of grid points, `n^dim`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of the `i`-th point along an axis.
    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.dx()
    }

    /// Signed lattice index of FFT slot `j` along an axis, in `[−n/2, n/2)`.
    pub fn signed_index(&self, j: usize) -> i64 {
        if j < self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    /// Signed wavenumbers `k·π/R` along one axis in FFT order.
    pub fn axis_frequencies(&self) -> Vec<f64> {
        (0..self.n)
            .map(|j| self.signed_index(j) as f64 * self.freq_step)
            .collect()
    }

    /// Squared integer lattice norm `Σ k_i²` for each flat spectral index.
    pub fn lattice_norm_sq(&self) -> Vec<u64> {
        let k2: Vec<u64> = (0..self.n)
            .map(|j| (self.signed_index(j).pow(2)) as u64)
            .collect();
        match self.dim {
            1 => k2,
            _ => {
                let mut out = Vec::with_capacity(self.len());
                for a in &k2 {
                    for b in &k2 {
                        out.push(a + b);
                    }
                }
                out
            }
        }
    }

    /// `|ξ|` at every flat spectral index.
    pub fn frequency_norms(&self) -> Vec<f64> {
        self.lattice_norm_sq()
            .into_iter()
            .map(|q| (q as f64).sqrt() * self.freq_step)
            .collect()
    }

    /// Maximum `|ξ|` represented along one axis, `(n/2)·π/R`.
    pub fn nyquist(&self) -> f64 {
        (self.n / 2) as f64 * self.freq_step
    }

    /// Same physical extent per cell at twice the domain width.
    pub fn doubled(&self) -> Result<PeriodicGrid> {
        make_grid(self.dim, self.n * 2, self.half_width * 2.0)
    }
}

type SymbolFn = dyn Fn(f64) -> Result<f64> + Send + Sync;

/// A Fourier multiplier depending only on `|ξ|`.
#[derive(Clone)]
pub struct RadialSymbol {
    label: String,
    rule: Arc<SymbolFn>,
}

impl fmt::Debug for RadialSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialSymbol")
            .field("label", &self.label)
            .finish()
    }
}

impl RadialSymbol {
    pub fn new<F>(label: impl Into<String>, rule: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            rule: Arc::new(rule),
        }
    }

    /// Symbol from an infallible closure.
    pub fn from_fn<F>(label: impl Into<String>, rule: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(label, move |xi| Ok(rule(xi)))
    }

    pub fn constant(value: f64) -> Self {
        Self::from_fn(format!("const({value})"), move |_| value)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Evaluates at `|ξ| = xi_norm`, rejecting non-finite values.
    pub fn eval(&self, xi_norm: f64) -> Result<f64> {
        let value = (self.rule)(xi_norm)?;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFiniteSymbol {
                label: self.label.clone(),
                xi: xi_norm,
                value,
            })
        }
    }

    pub fn product(&self, other: &RadialSymbol) -> RadialSymbol {
        let (a, b) = (self.clone(), other.clone());
        RadialSymbol::new(format!("{}*{}", self.label, other.label), move |xi| {
            Ok(a.eval(xi)? * b.eval(xi)?)
        })
    }

    pub fn difference(&self, other: &RadialSymbol) -> RadialSymbol {
        let (a, b) = (self.clone(), other.clone());
        RadialSymbol::new(format!("{}-{}", self.label, other.label), move |xi| {
            Ok(a.eval(xi)? - b.eval(xi)?)
        })
    }

    pub fn scaled(&self, factor: f64) -> RadialSymbol {
        let a = self.clone();
        RadialSymbol::new(format!("{factor}*{}", self.label), move |xi| {
            Ok(factor * a.eval(xi)?)
        })
    }

    /// `e^{−t·m}`.
    pub fn exp_neg(&self, t: f64) -> RadialSymbol {
        let a = self.clone();
        RadialSymbol::new(format!("exp(-{t}*{})", self.label), move |xi| {
            Ok((-t * a.eval(xi)?).exp())
        })
    }

    /// Values on the grid's spectral lattice in flat FFT order.
    ///
    /// Each distinct `|ξ|` is evaluated once.
    pub fn on_grid(&self, grid: &PeriodicGrid) -> Result<Vec<f64>> {
        let table = RadialTable::build(self, grid, None)?;
        Ok(grid.radial_keys().map(|k| table.values[k]).collect())
    }
}

impl PeriodicGrid {
    /// Radial key of every flat spectral index: `|k|` in 1D, `|k|²` in 2D.
    pub fn radial_keys(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.n;
        let total = self.len();
        (0..total).map(move |idx| match self.dim {
            1 => self.signed_index(idx).unsigned_abs() as usize,
            _ => {
                let a = self.signed_index(idx / n);
                let b = self.signed_index(idx % n);
                (a * a + b * b) as usize
            }
        })
    }

    /// `|ξ|` belonging to a radial key.
    pub fn key_to_xi(&self, key: usize) -> f64 {
        match self.dim {
            1 => key as f64 * self.freq_step,
            _ => (key as f64).sqrt() * self.freq_step,
        }
    }

    fn max_key(&self) -> usize {
        let h = self.n / 2;
        if self.dim == 1 {
            h
        } else {
            2 * h * h
        }
    }
}

/// Symbol values indexed by radial key, with NaN at keys absent from the lattice.
#[derive(Debug, Clone)]
pub struct RadialTable {
    pub grid: PeriodicGrid,
    pub values: Vec<f64>,
}

impl RadialTable {
    /// Evaluates `m` at every distinct `|ξ|` of `grid`.
    ///
    /// When `coarser` is the table of the grid with half the points and half
    /// the width, its values are reused: key `k` there is key `2k` (1D) or
    /// `4k` (2D) here, at exactly the same `|ξ|`.
    pub fn build(
        m: &RadialSymbol,
        grid: &PeriodicGrid,
        coarser: Option<&RadialTable>,
    ) -> Result<Self> {
        let max_key = grid.max_key();
        let mut present = vec![false; max_key + 1];
        if grid.dim == 1 {
            present.iter_mut().for_each(|p| *p = true);
        } else {
            let h = (grid.n / 2) as i64;
            for a in 0..=h {
                for b in a..=h {
                    present[(a * a + b * b) as usize] = true;
                }
            }
        }
        let factor = if grid.dim == 1 { 2 } else { 4 };
        let reuse = coarser.filter(|c| {
            c.grid.dim == grid.dim
                && c.grid.n * 2 == grid.n
                && c.grid.half_width * 2.0 == grid.half_width
        });
        let mut values = vec![f64::NAN; max_key + 1];
        let mut missing = Vec::new();
        for key in 0..=max_key {
            if !present[key] {
                continue;
            }
            match reuse {
                Some(c)
                    if key % factor == 0
                        && key / factor < c.values.len()
                        && !c.values[key / factor].is_nan() =>
                {
                    values[key] = c.values[key / factor];
                }
                _ => missing.push(key),
            }
        }
        let fresh: Vec<Result<f64>> = missing
            .par_iter()
            .map(|&k| m.eval(grid.key_to_xi(k)))
            .collect();
        for (key, value) in missing.into_iter().zip(fresh) {
            values[key] = value?;
        }
        Ok(Self {
            grid: *grid,
            values,
        })
    }

    pub fn sup_abs(&self) -> f64 {
        self.values
            .iter()
            .filter(|v| !v.is_nan())
            .fold(0.0_f64, |a, v| a.max(v.abs()))
    }
}

type PlanCache = Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>;

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<PlanCache> = OnceLock::new();
    let mut plans = PLANS
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .unwrap();
    plans
        .entry((n, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

fn transpose_square(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}

fn transform(buf: &mut [Complex64], dim: usize, n: usize, inverse: bool) {
    let fft = plan(n, inverse);
    // rustfft processes every contiguous chunk of length n.
    fft.process(buf);
    if dim == 2 {
        transpose_square(buf, n);
        fft.process(buf);
        transpose_square(buf, n);
    }
}

/// Unnormalized forward DFT of real samples.
pub fn forward(grid: &PeriodicGrid, physical: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = physical.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    forward_in_place(grid, &mut buf);
    buf
}

pub fn forward_in_place(grid: &PeriodicGrid, buf: &mut [Complex64]) {
    transform(buf, grid.dim, grid.n, false);
}

/// Inverse DFT including the `1/n^d` factor.
pub fn inverse_in_place(grid: &PeriodicGrid, buf: &mut [Complex64]) {
    transform(buf, grid.dim, grid.n, true);
    let scale = 1.0 / grid.len() as f64;
    for z in buf.iter_mut() {
        *z *= scale;
    }
}

/// Inverse DFT returning the real part and the relative imaginary residue.
pub fn inverse_real(grid: &PeriodicGrid, spectral: &[Complex64]) -> (Vec<f64>, f64) {
    let mut buf = spectral.to_vec();
    inverse_in_place(grid, &mut buf);
    let mut max_re: f64 = 0.0;
    let mut max_im: f64 = 0.0;
    for z in &buf {
        max_re = max_re.max(z.re.abs());
        max_im = max_im.max(z.im.abs());
    }
    let residue = if max_re > 0.0 {
        max_im / max_re
    } else {
        max_im
    };
    (buf.into_iter().map(|z| z.re).collect(), residue)
}

/// A real field sampled on a periodic grid with a lazily computed spectrum.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: PeriodicGrid,
    physical: Vec<f64>,
    spectral: OnceLock<Vec<Complex64>>,
}

impl SpectralField {
    pub fn from_physical(grid: PeriodicGrid, physical: Vec<f64>) -> Result<Self> {
        if physical.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.len(),
                physical.len()
            )));
        }
        Ok(Self {
            grid,
            physical,
            spectral: OnceLock::new(),
        })
    }

    /// Builds a real field from spectral coefficients, discarding the
    /// imaginary residue of the inverse transform.
    pub fn from_spectral(grid: PeriodicGrid, spectral: Vec<Complex64>) -> Result<Self> {
        if spectral.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                spectral.len()
            )));
        }
        let (physical, _) = inverse_real(&grid, &spectral);
        let cell = OnceLock::new();
        let _ = cell.set(spectral);
        Ok(Self {
            grid,
            physical,
            spectral: cell,
        })
    }

    /// Samples `f(x)` (1D) or `f(x, y)` (2D) at the grid points.
    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        let n = grid.n;
        let physical = match grid.dim {
            1 => (0..n).map(|i| f(&[grid.coord(i)])).collect(),
            _ => {
                let mut v = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        v.push(f(&[grid.coord(i), grid.coord(j)]));
                    }
                }
                v
            }
        };
        Self {
            grid,
            physical,
            spectral: OnceLock::new(),
        }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn physical(&self) -> &[f64] {
        &self.physical
    }

    pub fn spectral(&self) -> &[Complex64] {
        self.spectral
            .get_or_init(|| forward(&self.grid, &self.physical))
    }

    pub fn into_physical(self) -> Vec<f64> {
        self.physical
    }

    pub fn scaled(&self, factor: f64) -> SpectralField {
        SpectralField {
            grid: self.grid,
            physical: self.physical.iter().map(|x| factor * x).collect(),
            spectral: OnceLock::new(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.physical.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Flat index of the largest sample; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.physical.iter().enumerate() {
            if v > self.physical[best] {
                best = i;
            }
        }
        best
    }

    /// Grid coordinates of a flat index.
    pub fn point(&self, index: usize) -> Vec<f64> {
        match self.grid.dim {
            1 => vec![self.grid.coord(index)],
            _ => vec![
                self.grid.coord(index / self.grid.n),
                self.grid.coord(index % self.grid.n),
            ],
        }
    }

    /// The trigonometric interpolant of the samples.
    pub fn interpolant(&self) -> TrigInterpolant {
        TrigInterpolant::new(&self.grid, self.spectral())
    }
}

/// Multiplies the spectrum of `f` by `m(|ξ|)`.
pub fn apply_multiplier(f: &SpectralField, m: &RadialSymbol) -> Result<SpectralField> {
    let grid = *f.grid();
    let values = m.on_grid(&grid)?;
    let spectral: Vec<Complex64> = f
        .spectral()
        .iter()
        .zip(&values)
        .map(|(c, v)| c * v)
        .collect();
    SpectralField::from_spectral(grid, spectral)
}

/// Evaluation of a band-limited field between grid points.
///
/// The Nyquist mode of each axis is split symmetrically between `±n/2` so
/// that the interpolant of real samples is real.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    dim: usize,
    origin: f64,
    // (wave vector, coefficient) with coefficient already divided by n^d.
    modes: Vec<([f64; 2], Complex64)>,
}

impl TrigInterpolant {
    pub fn new(grid: &PeriodicGrid, spectral: &[Complex64]) -> Self {
        let n = grid.n;
        let scale = 1.0 / grid.len() as f64;
        let axis = |j: usize| -> Vec<(f64, f64)> {
            let k = grid.signed_index(j);
            if k == -((n / 2) as i64) {
                vec![
                    (k as f64 * grid.freq_step, 0.5),
                    (-k as f64 * grid.freq_step, 0.5),
                ]
            } else {
                vec![(k as f64 * grid.freq_step, 1.0)]
            }
        };
        let mut modes = Vec::new();
        match grid.dim {
            1 => {
                for (j, &c) in spectral.iter().enumerate() {
                    if c.norm() == 0.0 {
                        continue;
                    }
                    for (k, w) in axis(j) {
                        modes.push(([k, 0.0], c * (w * scale)));
                    }
                }
            }
            _ => {
                for a in 0..n {
                    for b in 0..n {
                        let c = spectral[a * n + b];
                        if c.norm() == 0.0 {
                            continue;
                        }
                        for (ka, wa) in axis(a) {
                            for (kb, wb) in axis(b) {
                                modes.push(([ka, kb], c * (wa * wb * scale)));
                            }
                        }
                    }
                }
            }
        }
        Self {
            dim: grid.dim,
            origin: -grid.half_width,
            modes,
        }
    }

    /// Value, gradient and Hessian at `x`.
    pub fn jet(&self, x: &[f64]) -> (f64, [f64; 2], [[f64; 2]; 2]) {
        let mut value = 0.0;
        let mut grad = [0.0; 2];
        let mut hess = [[0.0; 2]; 2];
        let y0 = x[0] - self.origin;
        let y1 = if self.dim == 2 {
            x[1] - self.origin
        } else {
            0.0
        };
        for (k, c) in &self.modes {
            let phase = k[0] * y0 + k[1] * y1;
            let (s, co) = phase.sin_cos();
            // Re(c·e^{iφ}) and its derivative Re(i c e^{iφ}).
            let re = c.re * co - c.im * s;
            let dre = -c.re * s - c.im * co;
            value += re;
            for a in 0..self.dim {
                grad[a] += k[a] * dre;
                for b in 0..self.dim {
                    hess[a][b] -= k[a] * k[b] * re;
                }
            }
        }
        (value, grad, hess)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.jet(x).0
    }

    /// `Σ |c_k|·|k|²`, bounding the curvature of the interpolant.
    pub fn curvature_bound(&self) -> f64 {
        self.modes
            .iter()
            .map(|(k, c)| c.norm() * (k[0] * k[0] + k[1] * k[1]))
            .sum()
    }

    /// Newton iteration for a stationary point starting at `x`.
    ///
    /// Stops when the step falls below `1e-13` of the wavelength scale or
    /// after 50 iterations; a step that would leave the starting cell or a
    /// Hessian that is not negative definite keeps the last iterate.
    pub fn refine_max(&self, x: &[f64], cell: f64) -> Vec<f64> {
        let start = x.to_vec();
        let mut cur = x.to_vec();
        for _ in 0..50 {
            let (_, g, h) = self.jet(&cur);
            let step: Vec<f64> = if self.dim == 1 {
                if !(h[0][0] < 0.0) {
                    break;
                }
                vec![-g[0] / h[0][0]]
            } else {
                let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
                if !(h[0][0] < 0.0 && det > 0.0) {
                    break;
                }
                vec![
                    -(h[1][1] * g[0] - h[0][1] * g[1]) / det,
                    -(-h[1][0] * g[0] + h[0][0] * g[1]) / det,
                ]
            };
            let next: Vec<f64> = cur.iter().zip(&step).map(|(a, b)| a + b).collect();
            if next.iter().zip(&start).any(|(a, b)| (a - b).abs() > cell) {
                break;
            }
            let size = step.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
            cur = next;
            if size < 1e-13 * cell.max(1.0) {
                break;
            }
        }
        cur
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_constructor_rejects_bad_input() {
        assert!(make_grid(3, 8, 1.0).is_err());
        assert!(make_grid(1, 12, 1.0).is_err());
        assert!(make_grid(1, 4, 1.0).is_err());
        assert!(make_grid(1, 8, 0.0).is_err());
        assert!(make_grid(1, 8, -1.0).is_err());
    }

    #[test]
    fn unit_frequency_step_on_canonical_grid() {
        let g = make_grid(1, 8, PI).unwrap();
        assert_eq!(g.freq_step, 1.0);
        let k = g.axis_frequencies();
        let mut sorted = k.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(sorted, vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
        let g2 = make_grid(2, 128, PI).unwrap();
        assert_eq!(g2.len(), 128 * 128);
        assert_eq!(g2.freq_step, 1.0);
    }

    #[test]
    fn frequency_step_for_large_domain() {
        let g = make_grid(1, 32768, 200.0).unwrap();
        assert!((g.freq_step - 0.015_707_963_267_948_966).abs() < 1e-17);
    }

    #[test]
    fn round_trip_1d_and_2d() {
        for dim in [1, 2] {
            let g = make_grid(dim, 32, 3.0).unwrap();
            let f = SpectralField::from_fn(g, |x| x.iter().map(|v| (1.3 * v).sin().exp()).sum());
            let (back, residue) = inverse_real(&g, f.spectral());
            let err = back
                .iter()
                .zip(f.physical())
                .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err <= 1e-12 * f.max_abs());
            assert!(residue < 1e-12);
        }
    }

    #[test]
    fn eigenfunction_multipliers() {
        let g = make_grid(1, 64, PI).unwrap();
        let f = SpectralField::from_fn(g, |x| x[0].cos());
        let sq = RadialSymbol::from_fn("xi^2", |xi| xi * xi);
        let out = apply_multiplier(&f, &sq).unwrap();
        // Round-off in empty modes is amplified by up to (n/2)².
        for (a, b) in out.physical().iter().zip(f.physical()) {
            assert!((a - b).abs() < 1e-11);
        }
        let id = RadialSymbol::constant(1.0);
        let out = apply_multiplier(&f, &id).unwrap();
        for (a, b) in out.physical().iter().zip(f.physical()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn non_finite_symbol_names_frequency() {
        let g = make_grid(1, 16, PI).unwrap();
        let f = SpectralField::from_fn(g, |x| x[0].cos());
        let bad = RadialSymbol::from_fn("inv", |xi| 1.0 / xi);
        match apply_multiplier(&f, &bad) {
            Err(Error::NonFiniteSymbol { xi, label, .. }) => {
                assert_eq!(xi, 0.0);
                assert_eq!(label, "inv");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn interpolant_reproduces_samples_and_derivatives() {
        let g = make_grid(2, 16, PI).unwrap();
        let f = SpectralField::from_fn(g, |x| {
            (2.0 * x[0]).sin() * x[1].cos() + 0.3 * (x[0] + 3.0 * x[1]).cos()
        });
        let it = f.interpolant();
        let idx = 37;
        let p = f.point(idx);
        assert!((it.value(&p) - f.physical()[idx]).abs() < 1e-13);
        let (_, grad, hess) = it.jet(&[0.4, -1.1]);
        let (x, y) = (0.4_f64, -1.1_f64);
        let gx = 2.0 * (2.0 * x).cos() * y.cos() - 0.3 * (x + 3.0 * y).sin();
        let gy = -(2.0 * x).sin() * y.sin() - 0.9 * (x + 3.0 * y).sin();
        let hxy = -2.0 * (2.0 * x).cos() * y.sin() - 0.9 * (x + 3.0 * y).cos();
        assert!((grad[0] - gx).abs() < 1e-12);
        assert!((grad[1] - gy).abs() < 1e-12);
        assert!((hess[0][1] - hxy).abs() < 1e-12);
    }

    #[test]
    fn nyquist_mode_interpolates_real() {
        let g = make_grid(1, 8, PI).unwrap();
        let f = SpectralField::from_fn(g, |x| (4.0 * x[0]).cos());
        let it = f.interpolant();
        assert!((it.value(&[0.0]) - 1.0).abs() < 1e-13);
        assert!((it.value(&[PI / 8.0]) - (PI / 2.0).cos()).abs() < 1e-13);
    }
}
