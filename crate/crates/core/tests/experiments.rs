use std::f64::consts::PI;

use measured_bath::analytics::{attractor, attractor_resonant};
use measured_bath::dynamics::Engine;
use measured_bath::experiments::{
    attractor_map, compare_sampled, run_relaxation, verify_freezing, zeno_scan, AxisRange, FreezingConfig,
    ScenarioConfig, ZenoExact,
};
use measured_bath::model::ModelParams;
use measured_bath::Error;

#[test]
fn halving_the_coupling_keeps_the_plateau_and_quadruples_the_steps() {
    let base = ScenarioConfig::fig2();
    let mut weak = base.clone();
    weak.params.lambda /= 2.0;
    let (a, b) = (run_relaxation(&base).unwrap(), run_relaxation(&weak).unwrap());
    assert!((a.plateau - b.plateau).abs() < 0.01, "{} vs {}", a.plateau, b.plateau);
    let ratio = b.steps as f64 / a.steps as f64;
    assert!((ratio - 4.0).abs() < 0.05, "step ratio {ratio}");
    assert!(a.pass && b.pass);
}

#[test]
fn sampled_thousand_trajectories_match_the_exact_average() {
    for cfg in [ScenarioConfig::fig2(), ScenarioConfig::fig3()] {
        let s = compare_sampled(&cfg, 1000).unwrap();
        assert!(s.max_z <= 4.0, "{}: max z {:.2} at step {}", cfg.name, s.max_z, s.worst_step);
    }
}

#[test]
fn sampled_runs_are_reproducible() {
    let mut cfg = ScenarioConfig::fig2();
    cfg.engine = Engine::Sampled;
    cfg.trajectories = 64;
    cfg.steps = Some(40);
    let a = run_relaxation(&cfg).unwrap().series.unwrap();
    let b = run_relaxation(&cfg).unwrap().series.unwrap();
    assert_eq!(a, b);
    cfg.master_seed += 1;
    assert_ne!(a, run_relaxation(&cfg).unwrap().series.unwrap());
}

#[test]
fn default_freezing_point_is_first_order_and_holds() {
    let r = verify_freezing(&FreezingConfig::default()).unwrap();
    assert_eq!((r.n, r.m), (1, 1));
    assert!(r.rho00_drift <= 0.03 && r.abs_rho10_drift <= 0.03);
    assert!(r.pass);
}

#[test]
fn frozen_coherence_rotates_at_c2() {
    let r = verify_freezing(&FreezingConfig::default()).unwrap();
    let rel = ((r.phase_per_step - r.c2) / r.c2).abs();
    assert!(rel <= 0.2, "phase per step {:.5} vs c2 {:.5}", r.phase_per_step, r.c2);
}

#[test]
fn off_freezing_point_is_rejected() {
    let mut cfg = FreezingConfig::default();
    cfg.params.detuning = 1.9;
    cfg.env.delta_b = cfg.params.delta_b();
    assert!(matches!(verify_freezing(&cfg), Err(Error::NotFreezingPoint { .. })));
}

#[test]
fn attractor_grid_resonant_row_and_spot_values() {
    let delta_s = 1.0;
    let beta = 0.75;
    let dt = AxisRange {
        lo: 0.0,
        hi: 4.0 * PI,
        n: 8,
        open_lo: true,
    };
    let detuning = AxisRange {
        lo: 0.0,
        hi: 0.7,
        n: 2,
        open_lo: false,
    };
    let grid = attractor_map(&dt, &detuning, delta_s, beta).unwrap();
    let resonant = grid.rows().next().unwrap();
    for cell in resonant {
        let want = attractor_resonant(cell.dt, delta_s, beta);
        let got = cell.rho00_star.unwrap();
        assert!((got - want).abs() < 1e-12, "dt {}: {got} vs {want}", cell.dt);
    }
    // Δt = π on the resonant row: a pure Boltzmann weight at β·δS.
    let at_pi = &resonant[1];
    assert!((at_pi.dt - PI).abs() < 1e-12);
    assert!((at_pi.rho00_star.unwrap() - 1.0 / (1.0 + (-beta * delta_s).exp())).abs() < 1e-12);
    assert!((at_pi.rho00_star.unwrap() - 0.6792).abs() < 1e-4);

    let inverted = ModelParams::new(1.0, 0.7, 0.05, 2.0 * PI / 0.7, (5.0f64 / 3.0).ln() / 1.7).unwrap();
    assert!((attractor(&inverted).unwrap().rho00_star - 0.375).abs() < 1e-12);
}

#[test]
fn zeno_half_life_grows_as_the_interval_shrinks() {
    let p = ModelParams::new(1.0, 0.0, 0.05, PI, 3f64.ln()).unwrap();
    let cfg = ScenarioConfig::fig2();
    let exact = ZenoExact {
        env: cfg.env.clone(),
        k0: cfg.k0,
        max_steps: 4000,
    };
    let dts = [0.25, 0.5, 1.0, 2.0, PI];
    let scan = zeno_scan(&dts, &p, Some(&exact)).unwrap();
    for w in scan.windows(2) {
        assert!(w[0].r < w[1].r);
        assert!(w[0].analytic_half_life.unwrap() > w[1].analytic_half_life.unwrap());
        assert!(w[0].exact_half_life.unwrap() >= w[1].exact_half_life.unwrap());
    }
    assert!(zeno_scan(&[1.0, 0.5], &p, None).is_err());
}
