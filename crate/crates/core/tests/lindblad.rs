use nalgebra::DMatrix;
use proptest::prelude::*;
use sas_core::master_equation::{
    evolve, g2_cross, scan_resonance, simulate_point, DensityOperator, EvolveOptions, ModelConfig, ScanOptions, C64,
};
use sas_core::statistics::{g2_from_counts, sampling::sample_joint};
use sas_core::ExecMode;

/// Random mixture of three random pure states on the `n_max = 2` space.
fn random_state(seed: &[f64]) -> DensityOperator {
    let dim = 27;
    let mut rho = DMatrix::<C64>::zeros(dim, dim);
    for k in 0..3 {
        let psi = DMatrix::from_fn(dim, 1, |i, _| {
            let u = seed[(k * 2 * dim + 2 * i) % seed.len()] + 0.1 * i as f64;
            let v = seed[(k * 2 * dim + 2 * i + 1) % seed.len()] * (k + 1) as f64;
            C64::new(u.sin(), v.cos()) / (1.0 + i as f64)
        });
        let w = 1.0 + seed[k].abs();
        rho += &psi * psi.adjoint() * C64::new(w / psi.norm_squared(), 0.0);
    }
    let tr = rho.trace();
    let data: Vec<C64> = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| rho[(i, j)] / tr).collect();
    let mut out = DensityOperator::from_data(2, data).unwrap();
    // exact Hermiticity after rounding
    for i in 0..dim {
        for j in i..dim {
            let v = out.get(i, j);
            out.set(j, i, v.conj());
            if i == j {
                out.set(i, i, C64::new(v.re, 0.0));
            }
        }
    }
    out
}

fn label_mean(rho: &DensityOperator, phonon_sign: f64) -> f64 {
    rho.expect_diagonal(|s, a, b| s as f64 - a as f64 + phonon_sign * b as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_configurations_stay_physical(
        d in -60.0f64..60.0,
        g_s in 0.0f64..0.6,
        g_as in 0.0f64..0.6,
        t1 in 0.2f64..5.0,
        n_th in 0.0f64..0.5,
        n_max in 2usize..=3,
        duration in 0.5f64..3.0,
    ) {
        let cfg = ModelConfig { shift: 1640.0 + d, g_s, g_as, t1, n_thermal: n_th, n_max, pulse_duration: duration, ..Default::default() };
        let rho0 = DensityOperator::thermal_phonon(n_max, n_th);
        let opts = EvolveOptions { dt: None, t_end: duration, store_every: 20, check_positivity: false };
        let traj = evolve(&rho0, &cfg, &opts).unwrap();
        for rho in &traj.states {
            prop_assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-9);
            prop_assert!(rho.hermiticity_error() <= 1e-12);
            prop_assert!(rho.min_eigenvalue() >= -1e-9);
        }
    }

    #[test]
    fn arbitrary_states_keep_trace_and_hermiticity(
        seed in prop::collection::vec(-3.0f64..3.0, 12),
        d in -25.0f64..25.0,
        g_s in 0.0f64..0.6,
        g_as in 0.0f64..0.6,
        t1 in 0.2f64..5.0,
        n_th in 0.0f64..0.5,
    ) {
        let cfg = ModelConfig { shift: 1640.0 + d, g_s, g_as, t1, n_thermal: n_th, n_max: 2, ..Default::default() };
        let opts = EvolveOptions { dt: None, t_end: 1.0, store_every: 25, check_positivity: false };
        let traj = evolve(&random_state(&seed), &cfg, &opts).unwrap();
        for rho in &traj.states {
            prop_assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-9);
            prop_assert!(rho.hermiticity_error() <= 1e-12);
        }
    }

    #[test]
    fn closed_dynamics_conserve_the_pair_label(
        seed in prop::collection::vec(-3.0f64..3.0, 12),
        d in -25.0f64..25.0,
        g in 0.05f64..0.6,
    ) {
        let cfg = ModelConfig { shift: 1640.0 + d, g_s: g, g_as: 0.7 * g, t1: f64::INFINITY, n_max: 2, ..Default::default() };
        let rho0 = random_state(&seed);
        let opts = EvolveOptions { dt: None, t_end: 2.0, store_every: 20, check_positivity: false };
        let traj = evolve(&rho0, &cfg, &opts).unwrap();
        let m0 = label_mean(&rho0, -1.0);
        for rho in &traj.states {
            prop_assert!((label_mean(rho, -1.0) - m0).abs() < 1e-6);
        }
    }

    #[test]
    fn phonon_population_decays_exponentially(t1 in 0.1f64..20.0) {
        let cfg = ModelConfig { g_s: 0.0, g_as: 0.0, t1, n_thermal: 0.0, ..Default::default() };
        let traj = evolve(&DensityOperator::fock(3, 0, 0, 1), &cfg, &EvolveOptions::until(t1)).unwrap();
        let p1 = traj.last().get(cfg.basis().index(0, 0, 1), cfg.basis().index(0, 0, 1)).re;
        prop_assert!((p1 - (-1.0f64).exp()).abs() < 1e-6, "{}", p1);
    }

    #[test]
    fn g2_of_a_weak_pair_state(eps in 1e-3f64..3.0) {
        let basis = ModelConfig::default().basis();
        let mut amps = vec![C64::default(); basis.dim()];
        amps[basis.index(0, 0, 0)] = C64::new(1.0, 0.0);
        amps[basis.index(1, 1, 0)] = C64::new(eps, 0.0);
        let rho = DensityOperator::pure(3, &amps).unwrap();
        let expected = (1.0 + eps * eps) / (eps * eps);
        prop_assert!((g2_cross(&rho).unwrap() - expected).abs() <= 1e-12 * expected);
    }
}

#[test]
fn the_plus_phonon_label_is_not_conserved() {
    // Stokes emission creates a phonon, so n_S - n_aS + n_b moves by 2 per pair
    let cfg = ModelConfig { shift: 1645.0, g_s: 0.3, g_as: 0.3, t1: f64::INFINITY, ..Default::default() };
    let rho0 = DensityOperator::vacuum(3);
    let rho = evolve(&rho0, &cfg, &EvolveOptions::until(2.0)).unwrap().last().clone();
    assert!(label_mean(&rho, -1.0).abs() < 1e-9);
    assert!(label_mean(&rho, 1.0) > 1e-3);
}

fn g2_at(cfg: &ModelConfig, dt: Option<f64>) -> f64 {
    simulate_point(cfg, dt, false).unwrap().g2
}

#[test]
fn truncation_and_step_are_converged() {
    let n_th = sas_core::statistics::bose_einstein(1640.0, 295.0);
    for shift in [1600.0, 1700.0] {
        let cfg = ModelConfig { shift, n_thermal: n_th, ..Default::default() };
        let base = g2_at(&cfg, None);
        let wide = g2_at(&ModelConfig { n_max: 2 * cfg.n_max, ..cfg }, None);
        assert!((wide / base - 1.0).abs() < 1e-2, "n_max: {base} vs {wide} at {shift}");

        let lv_dt = sas_core::master_equation::Liouvillian::new(&cfg, &DensityOperator::thermal_phonon(3, n_th))
            .unwrap()
            .rate_bound();
        let dt = sas_core::master_equation::automatic_step(cfg.pulse_duration, lv_dt);
        let fine = g2_at(&cfg, Some(dt / 2.0));
        assert!((fine / base - 1.0).abs() < 1e-3, "dt: {base} vs {fine} at {shift}");
    }
}

#[test]
fn sampled_counts_reproduce_the_state_correlation() {
    let cfg = ModelConfig { shift: 1646.0, g_s: 0.25, g_as: 0.2, t1: 1.0, n_thermal: 0.2, pulse_duration: 4.0, ..Default::default() };
    let rho = DensityOperator::thermal_phonon(3, cfg.n_thermal);
    let rho = evolve(&rho, &cfg, &EvolveOptions::until(cfg.pulse_duration)).unwrap().last().clone();
    let exact = g2_cross(&rho).unwrap();
    let record = sample_joint(&rho.photon_distribution(), 1_000_000, 11, ExecMode::Parallel).unwrap();
    let est = g2_from_counts(&record, ExecMode::Parallel).unwrap();
    assert!(
        (est.g2_s_as.value - exact).abs() < 3.0 * est.g2_s_as.std_error,
        "{} +- {} vs {exact}",
        est.g2_s_as.value,
        est.g2_s_as.std_error
    );
}

#[test]
fn scans_do_not_depend_on_the_schedule() {
    let shifts: Vec<f64> = (0..6).map(|i| 1600.0 + 16.0 * i as f64).collect();
    let template = ModelConfig { pulse_duration: 3.0, ..Default::default() };
    let seq = ScanOptions { exec: ExecMode::Sequential, ..Default::default() };
    let par = ScanOptions { exec: ExecMode::Parallel, ..Default::default() };
    let a = scan_resonance(&template, &shifts, &[0.5, 2.0], &seq).unwrap();
    let b = scan_resonance(&template, &shifts, &[0.5, 2.0], &par).unwrap();
    assert_eq!(a, b);
}

#[test]
fn resonance_is_finite_and_flagged() {
    let template = ModelConfig::default();
    let r = scan_resonance(&template, &[1640.0], &[0.5], &ScanOptions::default()).unwrap();
    let p = r.curves[0].points[0];
    assert!(p.g2.is_finite() && p.g2 > 1.0);
    assert!(p.flags.near_resonance);
}
