use std::f64::consts::PI;

use logdiss::config::{Exponent, SimConfig};
use logdiss::harness::{
    assemble_bound, bound_constant, growth_constant, run_max_principle, run_v_independence, sweep,
    SweepAxis, SweepParameter, DEFAULT_SWEEP_CAP,
};
use logdiss::symbols::{DissipationSpec, Variant};

fn config(spec: &str, t_final: f64) -> SimConfig {
    SimConfig::from_json(&format!(
        r#"{{"dim": 2, "n": 32, "half_width": {PI}, "spec": {spec},
            "velocity": {{"kind": "STREAM", "amplitude": 1.0, "seed": 42}},
            "theta_seed": 3, "p_list": [1, 2, "inf"], "t_final": {t_final}}}"#
    ))
    .unwrap()
}

fn spec(variant: &str, gamma: f64, beta: f64, nu: f64) -> String {
    format!(
        r#"{{"variant": "{variant}", "gamma": {gamma}, "beta": {beta}, "lambda": 2.0, "nu": {nu}}}"#
    )
}

#[test]
fn identity_dissipation_has_unit_decay_rate() {
    let out = run_max_principle(&config(&spec("NONE", 0.0, 0.0, 1.0), 1.0)).unwrap();
    let g = out.report.growth(Exponent(2.0)).unwrap();
    assert!((g + 1.0).abs() < 1e-3, "{g}");
    assert!(out.report.pass);
}

#[test]
fn transport_alone_has_no_growth() {
    let out = run_max_principle(&config(&spec("A", 1.0, 1.0, 0.0), 1.0)).unwrap();
    assert!(out.report.growth(Exponent(2.0)).unwrap().abs() < 1e-3);
    assert_eq!(out.report.bound_constant, 0.0);
}

#[test]
fn classical_case_does_not_grow_in_sup_norm() {
    let out = run_max_principle(&config(&spec("A", 1.0, 0.0, 0.1), 1.0)).unwrap();
    assert!(out.report.growth(Exponent::INF).unwrap() <= 1e-3);
}

#[test]
fn reports_are_deterministic() {
    let cfg = config(&spec("A", 1.5, 0.5, 0.1), 0.4);
    let a = run_max_principle(&cfg).unwrap();
    let b = run_max_principle(&cfg).unwrap();
    assert_eq!(a.report.to_json().unwrap(), b.report.to_json().unwrap());
    let (mut ca, mut cb) = (Vec::new(), Vec::new());
    a.series.write_csv(&mut ca).unwrap();
    b.series.write_csv(&mut cb).unwrap();
    assert_eq!(ca, cb);
}

#[test]
fn bound_is_monotone() {
    let spec = DissipationSpec::new(Variant::A, 1.5, 1.0, 2.0, 0.1).unwrap();
    let b = bound_constant(&spec, 1).unwrap();
    let more_nu = bound_constant(&DissipationSpec { nu: 0.2, ..spec }, 1).unwrap();
    assert!(more_nu.value >= b.value);
    assert!(assemble_bound(0.1, 2.0, 0.3) >= assemble_bound(0.1, 1.0, 0.3));
}

#[test]
fn growth_fit_skips_early_times() {
    let times = [0.0, 0.05, 0.5, 1.0];
    let norms = [1.0, 10.0, (0.5f64).exp(), 1.0f64.exp()];
    assert!((growth_constant(&times, &norms, 1.0).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(growth_constant(&[0.0], &[1.0], 0.0), None);
}

#[test]
fn empty_sweep_is_the_base_run() {
    let cfg = config(&spec("A", 1.0, 1.0, 0.1), 0.2);
    let (result, _) = sweep(&cfg, &[], DEFAULT_SWEEP_CAP).unwrap();
    assert_eq!(result.cells.len(), 1);
    let base = run_max_principle(&cfg).unwrap().report;
    assert_eq!(result.cells[0].report.as_ref().unwrap(), &base);
}

#[test]
fn sweep_covers_the_product_in_order() {
    let cfg = config(&spec("A", 1.0, 1.0, 0.1), 0.2);
    let axes: Vec<SweepAxis> = ["gamma=0.5,1.5", "beta=0,1"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let (result, outcomes) = sweep(&cfg, &axes, DEFAULT_SWEEP_CAP).unwrap();
    assert_eq!(result.cells.len(), 4);
    assert_eq!(outcomes.len(), 4);
    let got: Vec<(f64, f64)> = result
        .cells
        .iter()
        .map(|c| {
            (
                c.parameters[&SweepParameter::Gamma],
                c.parameters[&SweepParameter::Beta],
            )
        })
        .collect();
    assert_eq!(got, vec![(0.5, 0.0), (0.5, 1.0), (1.5, 0.0), (1.5, 1.0)]);
    assert!(result.aggregate.pass);
    assert!(sweep(&cfg, &axes, 3).is_err());
}

#[test]
fn independence_needs_amplitudes() {
    let cfg = config(&spec("A", 1.0, 1.0, 0.1), 0.2);
    assert!(run_v_independence(&cfg, &[]).is_err());
    let (report, outcomes) = run_v_independence(&cfg, &[0.5, 1.0]).unwrap();
    assert_eq!(outcomes.len(), 2);
    assert_eq!(report.amplitudes, vec![0.5, 1.0]);
}
