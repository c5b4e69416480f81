//! Adaptive Gauss–Kronrod quadrature (21-point Kronrod extension of the
//! 10-point Gauss rule) with global bisection of the worst interval.

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_703_299_663,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// Gauss weights for the nodes XGK[1], XGK[3], …, XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Requested accuracy: the integral is accepted once the summed error
/// estimate falls below `max(abs, rel·|I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub const fn relative(rel: f64) -> Self {
        Self {
            abs: 1e-300,
            rel,
            max_intervals: 2000,
        }
    }

    pub const fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    magnitude: f64,
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Segment {
        a,
        b,
        value,
        error,
        magnitude: resabs,
    }
}

/// Integrates `f` over `[a, b]` adaptively.
///
/// Non-finite integrand values are reported as non-convergence with the
/// offending estimate rather than silently propagated.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let mut segments = vec![kronrod21(&f, a, b)];
    let mut evaluations = 21;
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::QuadratureNonConvergence {
                value,
                error_estimate: error,
                requested: tol.abs.max(tol.rel * value.abs()),
            });
        }
        let requested = tol.abs.max(tol.rel * value.abs());
        // Requests below the rounding floor of the rule are met at the floor.
        let floor: f64 = 100.0 * f64::EPSILON * segments.iter().map(|s| s.magnitude).sum::<f64>();
        if error <= requested.max(floor) {
            return Ok(Integral {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        if segments.len() >= tol.max_intervals {
            return Err(Error::QuadratureNonConvergence {
                value,
                error_estimate: error,
                requested,
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, s)| {
                if s.error > acc.1 {
                    (i, s.error)
                } else {
                    acc
                }
            });
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a.min(s.b) || mid >= s.a.max(s.b) {
            // Interval can no longer be split in floating point.
            return Err(Error::QuadratureNonConvergence {
                value,
                error_estimate: error,
                requested,
            });
        }
        segments.push(kronrod21(&f, s.a, mid));
        segments.push(kronrod21(&f, mid, s.b));
        evaluations += 42;
    }
}

/// Integrates over consecutive breakpoints `points[0] < points[1] < …`,
/// splitting the tolerance budget across pieces.
pub fn integrate_pieces<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    tol: Tolerance,
) -> Result<Integral> {
    let mut total = Integral {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
    };
    for w in points.windows(2) {
        let piece = integrate(&f, w[0], w[1], tol)?;
        total.value += piece.value;
        total.error_estimate += piece.error_estimate;
        total.evaluations += piece.evaluations;
    }
    Ok(total)
}

/// `∫₀^upper τ^{β−1} f(τ) dτ` for `β > 0`.
///
/// For `β < 1` the weight is flattened with `u = τ^β`
/// (`τ^{β−1} dτ = du/β`), which leaves a smooth integrand on `[0, upper^β]`.
pub fn integrate_power_weight<F: Fn(f64) -> f64>(
    f: F,
    beta: f64,
    upper: f64,
    tol: Tolerance,
) -> Result<Integral> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "power weight requires beta > 0, got {beta}"
        )));
    }
    if upper <= 0.0 {
        return Ok(Integral {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    if beta < 1.0 {
        let inv = 1.0 / beta;
        let mut r = integrate(|u: f64| f(u.powf(inv)), 0.0, upper.powf(beta), tol)?;
        r.value *= inv;
        r.error_estimate *= inv;
        Ok(r)
    } else if beta == 1.0 {
        integrate(f, 0.0, upper, tol)
    } else {
        integrate(|t: f64| t.powf(beta - 1.0) * f(t), 0.0, upper, tol)
    }
}

/// `∫_lower^∞ τ^{β−1} e^{−rate·(τ−lower)} dτ` with an analytic remainder bound.
///
/// The range is truncated at `T = lower + 60/rate`, pushed outward until the
/// integrand is monotone past `T` when `β > 1`; the neglected remainder is
/// bounded by `T^{β−1} e^{−rate(T−lower)} / (rate − (β−1)⁺/T)` and added to
/// the error estimate.
pub fn integrate_power_exponential_tail(
    beta: f64,
    lower: f64,
    rate: f64,
    tol: Tolerance,
) -> Result<Integral> {
    if !(beta > 0.0) || !(rate > 0.0) || !(lower >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tail integral requires beta > 0, rate > 0, lower >= 0 (got {beta}, {rate}, {lower})"
        )));
    }
    let excess = (beta - 1.0).max(0.0);
    let mut cut = lower + 60.0 / rate;
    while excess > 0.0 && cut * rate < 2.0 * excess {
        cut *= 2.0;
    }
    let integrand = |t: f64| (-rate * (t - lower)).exp();
    let body = if lower == 0.0 {
        // The weight τ^{β−1} is singular at zero only here.
        let split = (1.0 / rate).min(cut);
        let head = integrate_power_weight(integrand, beta, split, tol)?;
        let tail = integrate(|t: f64| t.powf(beta - 1.0) * integrand(t), split, cut, tol)?;
        Integral {
            value: head.value + tail.value,
            error_estimate: head.error_estimate + tail.error_estimate,
            evaluations: head.evaluations + tail.evaluations,
        }
    } else {
        integrate(|t: f64| t.powf(beta - 1.0) * integrand(t), lower, cut, tol)?
    };
    let decay = rate - excess / cut;
    let remainder = cut.powf(beta - 1.0) * (-rate * (cut - lower)).exp() / decay;
    Ok(Integral {
        value: body.value,
        error_estimate: body.error_estimate + remainder,
        evaluations: body.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(
            |x| 3.0 * x * x + 2.0 * x,
            0.0,
            2.0,
            Tolerance::relative(1e-14),
        )
        .unwrap();
        assert!((r.value - 12.0).abs() < 1e-13);
        assert_eq!(r.evaluations, 21);
    }

    #[test]
    fn empty_interval_is_zero() {
        let r = integrate(|x: f64| x.exp(), 1.0, 1.0, Tolerance::relative(1e-12)).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn peaked_integrand_converges() {
        // ∫₀¹ e^{−200 x} dx = (1 − e^{−200})/200
        let r = integrate(
            |x: f64| (-200.0 * x).exp(),
            0.0,
            1.0,
            Tolerance::relative(1e-13),
        )
        .unwrap();
        assert!((r.value - 1.0 / 200.0).abs() < 1e-15);
    }

    #[test]
    fn power_weight_substitution_handles_singular_weight() {
        // ∫₀¹ τ^{−0.7} dτ = 1/0.3
        let r = integrate_power_weight(|_| 1.0, 0.3, 1.0, Tolerance::relative(1e-13)).unwrap();
        assert!((r.value - 1.0 / 0.3).abs() < 1e-12);
        // ∫₀² τ^{1.5} e^{−τ} dτ = γ(2.5, 2)
        let r = integrate_power_weight(|t: f64| (-t).exp(), 2.5, 2.0, Tolerance::relative(1e-13))
            .unwrap();
        let want = crate::special::lower_incomplete_gamma(2.5, 2.0).unwrap();
        assert!((r.value - want).abs() < 1e-13 * want);
    }

    #[test]
    fn tail_integral_matches_gamma() {
        // ∫₀^∞ τ^{β−1} e^{−cτ} dτ = Γ(β)/c^β
        for (beta, c) in [(0.25, 0.4), (1.0, 1.0), (2.0, 0.7), (4.0, 2.1)] {
            let r =
                integrate_power_exponential_tail(beta, 0.0, c, Tolerance::relative(1e-13)).unwrap();
            let want = crate::special::gamma_fn(beta).unwrap() / c.powf(beta);
            assert!((r.value - want).abs() < 1e-11 * want, "beta {beta}, c {c}");
            assert!(r.error_estimate < 1e-10 * want);
        }
    }

    #[test]
    fn nonconvergence_reports_achieved_error() {
        let tol = Tolerance {
            abs: 0.0,
            rel: 1e-15,
            max_intervals: 3,
        };
        match integrate(|x: f64| x.abs().sqrt().recip(), -1.0, 1.0, tol) {
            Err(Error::QuadratureNonConvergence { error_estimate, .. }) => {
                assert!(error_estimate > 0.0)
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
