//! Integrating-factor pseudo-spectral solver for
//! `∂ₜθ + v·∇θ + ν𝒜θ = 0` on the periodic torus.
//!
//! Dissipation is applied exactly through `e^{−ν·h·m(|ξ|)}`; advection is
//! advanced with classical RK4 on the 2/3-dealiased non-conservative form.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{Exponent, SimConfig, TimeDependence, VelocityKind};
use crate::error::{Error, Result};
use crate::grid::{
    forward_in_place, inverse_in_place, PeriodicGrid, SpectralField, TrigInterpolant,
};
use crate::random::{band_limited_field, normalized_field};
use crate::symbols::{full_symbol, DissipationSpec};

/// Floor on `‖v‖_∞` in the CFL rule.
pub const VELOCITY_FLOOR: f64 = 1e-6;
/// Upper cap on the time step.
pub const MAX_DT: f64 = 0.01;
/// Highest lattice mode of the random stream function.
pub const STREAM_MODES: usize = 2;
/// Refinement candidates examined per extremum in [`refined_extrema`].
const EXTREMUM_CANDIDATES: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VelocityField {
    pub kind: VelocityKind,
    pub amplitude: f64,
    pub seed: u64,
    pub time_dependence: TimeDependence,
    /// One physical array per axis.
    #[serde(skip)]
    pub components: Vec<Vec<f64>>,
}

impl VelocityField {
    /// A sampled field; `amplitude` is recorded as its grid `‖v‖_∞`.
    pub fn custom(
        grid: &PeriodicGrid,
        components: Vec<Vec<f64>>,
        time_dependence: TimeDependence,
    ) -> Result<Self> {
        if components.len() != grid.dim || components.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::InvalidArgument(format!(
                "custom velocity needs {} components of {} samples",
                grid.dim,
                grid.len()
            )));
        }
        if components.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(
                "custom velocity has non-finite samples".into(),
            ));
        }
        let mut v = Self {
            kind: VelocityKind::Custom,
            amplitude: 0.0,
            seed: 0,
            time_dependence,
            components,
        };
        v.amplitude = v.max_norm();
        Ok(v)
    }

    /// Largest Euclidean length of `v` over the grid.
    pub fn max_norm(&self) -> f64 {
        if self.components.is_empty() {
            return 0.0;
        }
        (0..self.components[0].len())
            .map(|i| {
                self.components
                    .iter()
                    .map(|c| c[i] * c[i])
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    pub fn factor(&self, t: f64) -> f64 {
        match self.time_dependence {
            TimeDependence::Steady => 1.0,
            TimeDependence::Oscillatory { frequency } => (frequency * t).cos(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(|&x| x == 0.0)
    }

    /// Largest `|∇·v|` on the grid, computed spectrally.
    pub fn max_divergence(&self, grid: &PeriodicGrid) -> f64 {
        let mut div = vec![Complex64::new(0.0, 0.0); grid.len()];
        for (axis, c) in self.components.iter().enumerate() {
            let mut buf: Vec<Complex64> = c.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            forward_in_place(grid, &mut buf);
            let ik = derivative_factors(grid, axis);
            for ((d, b), k) in div.iter_mut().zip(&buf).zip(&ik) {
                *d += b * k;
            }
        }
        inverse_in_place(grid, &mut div);
        div.iter().map(|z| z.re.abs()).fold(0.0, f64::max)
    }
}

/// Builds a velocity field; `CUSTOM` fields go through [`VelocityField::custom`].
pub fn make_velocity(
    kind: VelocityKind,
    amplitude: f64,
    seed: u64,
    grid: &PeriodicGrid,
    time_dependence: TimeDependence,
) -> Result<VelocityField> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "amplitude must be >= 0, got {amplitude}"
        )));
    }
    let len = grid.len();
    let components = match kind {
        VelocityKind::Zero => vec![vec![0.0; len]; grid.dim],
        VelocityKind::Stream => {
            if grid.dim != 2 {
                return Err(Error::InvalidArgument(
                    "STREAM velocity requires dim = 2".into(),
                ));
            }
            let psi = band_limited_field(grid, STREAM_MODES, 0.0, false, seed)?;
            // v = (∂_y ψ, −∂_x ψ)
            let vx = spectral_derivative(grid, psi.spectral(), 1);
            let vy: Vec<f64> = spectral_derivative(grid, psi.spectral(), 0)
                .into_iter()
                .map(|x| -x)
                .collect();
            let mut v = vec![vx, vy];
            let peak = VelocityField {
                kind,
                amplitude,
                seed,
                time_dependence,
                components: v.clone(),
            }
            .max_norm();
            for c in v.iter_mut().flatten() {
                *c *= amplitude / peak;
            }
            v
        }
        VelocityKind::Compressible => {
            let w = PI / grid.half_width;
            let field =
                |f: &dyn Fn(&[f64]) -> f64| SpectralField::from_fn(*grid, f).into_physical();
            match grid.dim {
                1 => vec![field(&|x: &[f64]| amplitude * (w * x[0]).sin())],
                _ => vec![
                    field(&|x: &[f64]| amplitude * (w * x[0]).sin() * (w * x[1]).cos()),
                    field(&|x: &[f64]| amplitude * (w * x[1]).sin()),
                ],
            }
        }
        VelocityKind::Custom => {
            return Err(Error::InvalidArgument(
                "CUSTOM velocity is built from samples, see VelocityField::custom".into(),
            ))
        }
    };
    Ok(VelocityField {
        kind,
        amplitude,
        seed,
        time_dependence,
        components,
    })
}

/// `i·k_axis` per flat spectral index, zero on the Nyquist slot.
fn derivative_factors(grid: &PeriodicGrid, axis: usize) -> Vec<Complex64> {
    let n = grid.n;
    let k = |j: usize| -> f64 {
        if j == n / 2 {
            0.0
        } else {
            grid.signed_index(j) as f64 * grid.freq_step
        }
    };
    (0..grid.len())
        .map(|idx| {
            let j = match (grid.dim, axis) {
                (1, _) => idx,
                (_, 0) => idx / n,
                _ => idx % n,
            };
            Complex64::new(0.0, k(j))
        })
        .collect()
}

fn spectral_derivative(grid: &PeriodicGrid, spectral: &[Complex64], axis: usize) -> Vec<f64> {
    let ik = derivative_factors(grid, axis);
    let mut buf: Vec<Complex64> = spectral.iter().zip(&ik).map(|(c, k)| c * k).collect();
    inverse_in_place(grid, &mut buf);
    buf.into_iter().map(|z| z.re).collect()
}

/// 2/3-rule mask: keeps modes with `|k| < n/3` along every axis.
fn dealias_mask(grid: &PeriodicGrid) -> Vec<f64> {
    let n = grid.n;
    let keep = |j: usize| 3 * grid.signed_index(j).unsigned_abs() < n as u64;
    (0..grid.len())
        .map(|idx| {
            let ok = match grid.dim {
                1 => keep(idx),
                _ => keep(idx / n) && keep(idx % n),
            };
            if ok {
                1.0
            } else {
                0.0
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SimState {
    pub t: f64,
    pub theta: SpectralField,
    pub spec: DissipationSpec,
    pub v: VelocityField,
    pub dt: f64,
}

/// Precomputed factors for repeated steps of one size.
struct Stepper {
    grid: PeriodicGrid,
    dt: f64,
    full: Vec<f64>,
    half: Vec<f64>,
    derivative: Vec<Vec<Complex64>>,
    mask: Vec<f64>,
    v: VelocityField,
    advects: bool,
}

impl Stepper {
    fn new(
        grid: &PeriodicGrid,
        spec: &DissipationSpec,
        v: &VelocityField,
        dt: f64,
    ) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "dt must be positive, got {dt}"
            )));
        }
        let m = full_symbol(spec)?.on_grid(grid)?;
        let nu = spec.nu;
        Ok(Self {
            grid: *grid,
            dt,
            full: m.iter().map(|&x| (-nu * dt * x).exp()).collect(),
            half: m.iter().map(|&x| (-nu * 0.5 * dt * x).exp()).collect(),
            derivative: (0..grid.dim).map(|a| derivative_factors(grid, a)).collect(),
            mask: dealias_mask(grid),
            v: v.clone(),
            advects: !v.is_zero(),
        })
    }

    /// Spectrum of `−v(t)·∇θ`, dealiased.
    fn advection(&self, theta: &[Complex64], t: f64) -> Vec<Complex64> {
        let len = theta.len();
        let factor = self.v.factor(t);
        let mut product = vec![0.0; len];
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        for (axis, ik) in self.derivative.iter().enumerate() {
            for ((b, c), k) in buf.iter_mut().zip(theta).zip(ik) {
                *b = c * k;
            }
            inverse_in_place(&self.grid, &mut buf);
            for ((p, g), v) in product.iter_mut().zip(&buf).zip(&self.v.components[axis]) {
                *p += v * g.re;
            }
        }
        let mut out: Vec<Complex64> = product
            .iter()
            .map(|&p| Complex64::new(-factor * p, 0.0))
            .collect();
        forward_in_place(&self.grid, &mut out);
        for (o, m) in out.iter_mut().zip(&self.mask) {
            *o *= m;
        }
        out
    }

    fn advance(&self, u: &[Complex64], t: f64) -> Vec<Complex64> {
        if !self.advects {
            return u.iter().zip(&self.full).map(|(c, e)| c * e).collect();
        }
        let h = self.dt;
        let (e, e2) = (&self.full, &self.half);
        let a = self.advection(u, t);
        let u1: Vec<Complex64> = (0..u.len())
            .map(|i| e2[i] * (u[i] + 0.5 * h * a[i]))
            .collect();
        let b = self.advection(&u1, t + 0.5 * h);
        let u2: Vec<Complex64> = (0..u.len())
            .map(|i| e2[i] * u[i] + 0.5 * h * b[i])
            .collect();
        let c = self.advection(&u2, t + 0.5 * h);
        let u3: Vec<Complex64> = (0..u.len())
            .map(|i| e[i] * u[i] + h * e2[i] * c[i])
            .collect();
        let d = self.advection(&u3, t + h);
        (0..u.len())
            .map(|i| e[i] * u[i] + h / 6.0 * (e[i] * a[i] + 2.0 * e2[i] * (b[i] + c[i]) + d[i]))
            .collect()
    }
}

fn check_finite(spectral: &[Complex64], t: f64) -> Result<()> {
    if spectral
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::NumericalFailure {
            t,
            reason: "theta became non-finite".into(),
        });
    }
    Ok(())
}

/// One integrating-factor RK4 step of size `state.dt`.
pub fn step(state: &SimState) -> Result<SimState> {
    let grid = *state.theta.grid();
    let stepper = Stepper::new(&grid, &state.spec, &state.v, state.dt)?;
    let next = stepper.advance(state.theta.spectral(), state.t);
    let t = state.t + state.dt;
    check_finite(&next, t)?;
    Ok(SimState {
        t,
        theta: SpectralField::from_spectral(grid, next)?,
        spec: state.spec,
        v: state.v.clone(),
        dt: state.dt,
    })
}

/// `(Σ|f|^p·cell_volume)^{1/p}`, or the grid maximum of `|f|` for `p = ∞`.
pub fn norm_lp(f: &SpectralField, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "L^p exponent must be >= 1, got {p}"
        )));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let cell = f.grid().cell_volume;
    let sum: f64 = if p == 1.0 {
        f.physical().iter().map(|x| x.abs()).sum()
    } else if p == 2.0 {
        f.physical().iter().map(|x| x * x).sum()
    } else {
        f.physical().iter().map(|x| x.abs().powf(p)).sum()
    };
    Ok((sum * cell).powf(1.0 / p))
}

/// Minimum and maximum of the trigonometric interpolant of `f`.
///
/// Grid points within `(dx²/8)·Σ|c_k||k|²` of the grid extremum can sit next
/// to the continuous one; the best few are refined by Newton's method.
pub fn refined_extrema(f: &SpectralField) -> (f64, f64) {
    let grid = *f.grid();
    let top = |values: &[f64], spectral: Vec<Complex64>| -> f64 {
        let grid_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let interp = TrigInterpolant::new(&grid, &spectral);
        let slack = grid.dx() * grid.dx() / 8.0 * interp.curvature_bound();
        let mut candidates: Vec<usize> = (0..values.len())
            .filter(|&i| values[i] >= grid_max - slack)
            .collect();
        candidates.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
        candidates.truncate(EXTREMUM_CANDIDATES);
        candidates
            .into_iter()
            .map(|i| {
                let x = point_of(&grid, i);
                interp.value(&interp.refine_max(&x, grid.dx()))
            })
            .fold(grid_max, f64::max)
    };
    let max = top(f.physical(), f.spectral().to_vec());
    let negated: Vec<f64> = f.physical().iter().map(|x| -x).collect();
    let min = -top(&negated, f.spectral().iter().map(|c| -c).collect());
    (min, max)
}

fn point_of(grid: &PeriodicGrid, index: usize) -> Vec<f64> {
    match grid.dim {
        1 => vec![grid.coord(index)],
        _ => vec![grid.coord(index / grid.n), grid.coord(index % grid.n)],
    }
}

/// Sampled norms of a run.
///
/// `norm_inf`, `min_theta` and `max_theta` use the refined extrema of the
/// interpolant, so the sup norm tracks the continuous field rather than the
/// grid samples.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NormSeries {
    pub times: Vec<f64>,
    /// Finite requested exponents, in request order.
    pub exponents: Vec<Exponent>,
    /// `norms[j][i]` is `‖θ(times[i])‖_{exponents[j]}`.
    pub norms: Vec<Vec<f64>>,
    pub norm_inf: Vec<f64>,
    pub min_theta: Vec<f64>,
    pub max_theta: Vec<f64>,
}

impl NormSeries {
    pub fn new(p_list: &[Exponent]) -> Self {
        let mut exponents: Vec<Exponent> = Vec::new();
        for p in p_list.iter().filter(|p| !p.is_inf()) {
            if !exponents.contains(p) {
                exponents.push(*p);
            }
        }
        Self {
            norms: vec![Vec::new(); exponents.len()],
            exponents,
            ..Self::default()
        }
    }

    pub fn record(&mut self, t: f64, theta: &SpectralField) -> Result<()> {
        self.times.push(t);
        for (j, p) in self.exponents.iter().enumerate() {
            self.norms[j].push(norm_lp(theta, p.0)?);
        }
        let (lo, hi) = refined_extrema(theta);
        self.norm_inf.push(lo.abs().max(hi.abs()));
        self.min_theta.push(lo);
        self.max_theta.push(hi);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// The series for exponent `p`, `None` if it was not requested.
    pub fn series(&self, p: Exponent) -> Option<&[f64]> {
        if p.is_inf() {
            return Some(&self.norm_inf);
        }
        self.exponents
            .iter()
            .position(|q| *q == p)
            .map(|j| self.norms[j].as_slice())
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        let mut header = vec!["t".to_string()];
        header.extend(
            self.exponents
                .iter()
                .map(|p| format!("norm_p_{}", p.label())),
        );
        header.extend(["norm_inf", "min_theta", "max_theta"].map(String::from));
        writeln!(out, "{}", header.join(","))?;
        for i in 0..self.len() {
            let mut row = vec![fmt17(self.times[i])];
            row.extend(self.norms.iter().map(|s| fmt17(s[i])));
            row.extend([self.norm_inf[i], self.min_theta[i], self.max_theta[i]].map(fmt17));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv(&mut file)?;
        file.flush()?;
        Ok(())
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// A failed run with everything sampled before the failure.
#[derive(Debug, thiserror::Error)]
#[error("{error}")]
pub struct SimulationFailure {
    pub error: Error,
    pub series: NormSeries,
}

impl From<Error> for SimulationFailure {
    fn from(error: Error) -> Self {
        Self {
            error,
            series: NormSeries::default(),
        }
    }
}

/// Initial data: seeded band-limited field with modes `≤ n/8` and
/// `max|θ₀| = 1`.
pub fn initial_theta(grid: &PeriodicGrid, seed: u64) -> Result<SpectralField> {
    normalized_field(grid, (grid.n / 8).max(1), 1.5, seed)
}

pub fn velocity_from_config(cfg: &SimConfig, grid: &PeriodicGrid) -> Result<VelocityField> {
    let v = &cfg.velocity;
    match v.kind {
        VelocityKind::Custom => {
            let samples = v
                .samples
                .clone()
                .ok_or_else(|| Error::Config("CUSTOM velocity needs `samples`".into()))?;
            VelocityField::custom(grid, samples, v.time_dependence)
        }
        kind => make_velocity(kind, v.amplitude, v.seed, grid, v.time_dependence),
    }
}

/// Time step from the CFL rule, shortened so that it divides `t_final`.
pub fn time_step(cfl: f64, grid: &PeriodicGrid, v: &VelocityField, t_final: f64) -> (f64, usize) {
    let dt = (cfl * grid.dx() / v.max_norm().max(VELOCITY_FLOOR)).min(MAX_DT);
    if t_final <= 0.0 {
        return (dt, 0);
    }
    let steps = (t_final / dt).ceil().max(1.0) as usize;
    (t_final / steps as f64, steps)
}

pub fn initial_state(cfg: &SimConfig) -> Result<SimState> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let v = velocity_from_config(cfg, &grid)?;
    let (dt, _) = time_step(cfg.cfl, &grid, &v, cfg.t_final);
    Ok(SimState {
        t: 0.0,
        theta: initial_theta(&grid, cfg.theta_seed)?,
        spec: cfg.spec,
        v,
        dt,
    })
}

/// Runs `cfg` from its seeded initial data, sampling every
/// `sample_every` steps and at `t_final`.
#[allow(clippy::result_large_err)]
pub fn simulate(cfg: &SimConfig) -> std::result::Result<(NormSeries, SimState), SimulationFailure> {
    let state = initial_state(cfg)?;
    simulate_from(cfg, state)
}

/// As [`simulate`] from a given initial state.
#[allow(clippy::result_large_err)]
pub fn simulate_from(
    cfg: &SimConfig,
    state: SimState,
) -> std::result::Result<(NormSeries, SimState), SimulationFailure> {
    let grid = *state.theta.grid();
    let (dt, steps) = time_step(cfg.cfl, &grid, &state.v, cfg.t_final);
    let mut series = NormSeries::new(&cfg.p_list);
    series.record(state.t, &state.theta)?;
    if steps == 0 {
        return Ok((series, state));
    }
    let fail = |error: Error, series: NormSeries| SimulationFailure { error, series };
    let stepper = match Stepper::new(&grid, &state.spec, &state.v, dt) {
        Ok(s) => s,
        Err(e) => return Err(fail(e, series)),
    };
    let mut u = state.theta.spectral().to_vec();
    let mut theta = state.theta;
    let mut t = state.t;
    for i in 1..=steps {
        u = stepper.advance(&u, t);
        t = state.t + i as f64 * dt;
        if let Err(e) = check_finite(&u, t) {
            return Err(fail(e, series));
        }
        if i % cfg.sample_every == 0 || i == steps {
            theta = match SpectralField::from_spectral(grid, u.clone()) {
                Ok(f) => f,
                Err(e) => return Err(fail(e, series)),
            };
            if let Err(e) = series.record(t, &theta) {
                return Err(fail(e, series));
            }
        }
    }
    Ok((
        series,
        SimState {
            t,
            theta,
            spec: state.spec,
            v: state.v,
            dt,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::symbols::Variant;

    fn cos_field(grid: PeriodicGrid) -> SpectralField {
        SpectralField::from_fn(grid, |x| x[0].cos())
    }

    #[test]
    fn zero_velocity_is_pure_spectral_decay() {
        let g = make_grid(1, 64, PI).unwrap();
        let spec = DissipationSpec::new(Variant::A, 2.0, 0.0, 2.0, 1.0).unwrap();
        let state = SimState {
            t: 0.0,
            theta: cos_field(g),
            spec,
            v: make_velocity(VelocityKind::Zero, 1.0, 0, &g, TimeDependence::Steady).unwrap(),
            dt: 0.1,
        };
        let next = step(&state).unwrap();
        let expect = (-0.1f64).exp();
        for (a, b) in next.theta.physical().iter().zip(state.theta.physical()) {
            assert!((a - expect * b).abs() < 1e-14);
        }
        assert!((next.t - 0.1).abs() < 1e-15);
    }

    #[test]
    fn stream_field_is_solenoidal_with_requested_amplitude() {
        let g = make_grid(2, 64, PI).unwrap();
        let v = make_velocity(VelocityKind::Stream, 1.0, 42, &g, TimeDependence::Steady).unwrap();
        assert!((v.max_norm() - 1.0).abs() < 1e-12);
        assert!(v.max_divergence(&g) <= 1e-8 / PI);
        assert!(make_velocity(
            VelocityKind::Stream,
            1.0,
            42,
            &make_grid(1, 64, PI).unwrap(),
            TimeDependence::Steady
        )
        .is_err());
    }

    #[test]
    fn compressible_field_has_divergence() {
        let g = make_grid(1, 64, PI).unwrap();
        let v = make_velocity(
            VelocityKind::Compressible,
            2.0,
            0,
            &g,
            TimeDependence::Steady,
        )
        .unwrap();
        assert!((v.max_norm() - 2.0).abs() < 1e-12);
        assert!((v.max_divergence(&g) - 2.0).abs() < 1e-10);
        let g2 = make_grid(2, 32, PI).unwrap();
        let v2 = make_velocity(
            VelocityKind::Compressible,
            1.0,
            0,
            &g2,
            TimeDependence::Steady,
        )
        .unwrap();
        assert!(v2.max_divergence(&g2) > 0.1 / PI);
    }

    #[test]
    fn norms_of_simple_fields() {
        let g = make_grid(1, 64, PI).unwrap();
        let one = SpectralField::from_fn(g, |_| 1.0);
        assert!((norm_lp(&one, 1.0).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert_eq!(norm_lp(&one, f64::INFINITY).unwrap(), 1.0);
        assert!((norm_lp(&cos_field(g), 2.0).unwrap() - PI.sqrt()).abs() < 1e-12);
        assert!(norm_lp(&one, 0.5).is_err());
    }

    #[test]
    fn refined_extrema_find_off_grid_peaks() {
        let g = make_grid(1, 16, PI).unwrap();
        let f = SpectralField::from_fn(g, |x| (x[0] - 0.1).cos());
        let (lo, hi) = refined_extrema(&f);
        assert!((hi - 1.0).abs() < 1e-12 && (lo + 1.0).abs() < 1e-12);
        assert!(f.max_abs() < 1.0 - 1e-4);
    }

    #[test]
    fn csv_has_documented_columns() {
        let g = make_grid(1, 16, PI).unwrap();
        let mut s = NormSeries::new(&[Exponent(2.0), Exponent::INF, Exponent(1.0)]);
        s.record(0.0, &cos_field(g)).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "t,norm_p_2,norm_p_1,norm_inf,min_theta,max_theta"
        );
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn time_step_divides_final_time() {
        let g = make_grid(2, 128, PI).unwrap();
        let v = make_velocity(VelocityKind::Stream, 10.0, 1, &g, TimeDependence::Steady).unwrap();
        let (dt, steps) = time_step(0.5, &g, &v, 2.0);
        assert!((dt * steps as f64 - 2.0).abs() < 1e-12);
        assert!(dt <= 0.5 * g.dx() / 10.0 + 1e-15);
        let zero = make_velocity(VelocityKind::Zero, 0.0, 1, &g, TimeDependence::Steady).unwrap();
        assert_eq!(time_step(0.5, &g, &zero, 1.0), (0.01, 100));
    }
}
