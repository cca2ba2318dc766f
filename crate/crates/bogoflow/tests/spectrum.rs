use bogoflow::model::spectral_window;
use bogoflow::spectrum::{energy_error_diagnostic, oracle_ground_energy, BudgetConstants, BudgetTerm};
use bogoflow::{f_of_z, gap_bound_check, solve_fixed_point, FlowConfig, ModelParams};

fn params(n: u64, eps: f64) -> ModelParams {
    ModelParams::new(n, eps, 1.0, 1.0).unwrap()
}

#[test]
fn two_particles_analytic() {
    // M = 2: eigenvalues of [[0, 1/√2], [1/√2, 2ε]].
    let cfg = FlowConfig::default();
    for eps in [0.5, 0.1, 0.01] {
        let r = solve_fixed_point(&params(2, eps), &cfg).unwrap();
        let want = eps - (eps * eps + 0.5f64).sqrt();
        assert!((r.z_star - want).abs() <= 1e-12, "eps={eps}");
    }
}

#[test]
fn matches_oracle_at_1024() {
    let cfg = FlowConfig::default();
    for eps in [0.5, 0.1, 0.01, 0.001] {
        let p = params(1024, eps);
        let mut r = solve_fixed_point(&p, &cfg).unwrap();
        assert!(r.compare_oracle(&p).unwrap() <= 1e-10, "eps={eps}");
        assert!(r.f_at_root.unwrap().abs() <= 1e-10);
        assert!(r.bracket.0 <= r.z_star && r.z_star <= r.bracket.1);
    }
}

#[test]
fn upper_bound_in_regime() {
    let cfg = FlowConfig::default();
    for (n, eps) in [(1024u64, 0.1), (16_384, 0.01), (100_000, 0.04), (1_000_000, 0.01)] {
        let p = params(n, eps);
        assert!(bogoflow::check_assumptions(&p, &cfg).core_ok());
        let r = solve_fixed_point(&p, &cfg).unwrap();
        assert!(
            r.upper_bound_check,
            "n={n} eps={eps}: {} vs {}",
            r.z_star, r.upper_bound
        );
        assert!(r.in_window);
    }
}

#[test]
fn gap_bound_at_128() {
    let cfg = FlowConfig::default();
    for eps in [0.5, 0.1, 0.01] {
        let p = params(128, eps);
        let r = solve_fixed_point(&p, &cfg).unwrap();
        let g = gap_bound_check(&p, &r).unwrap();
        assert!(g.sector_gap > 0.0 && g.sector_holds && g.holds, "eps={eps}");
        assert_eq!(g.bound, (0.5f64).min(g.sector_bound));
        assert!(g.oracle_delta <= 1e-11);
    }
}

#[test]
fn large_outside_gap_leaves_sector_bound() {
    let cfg = FlowConfig::default();
    let p = ModelParams::new(128, 0.1, 1.0, 1e9).unwrap();
    let r = solve_fixed_point(&p, &cfg).unwrap();
    let g = gap_bound_check(&p, &r).unwrap();
    assert_eq!(g.bound, g.sector_bound);
    assert_eq!(g.effective_gap, g.sector_gap);
}

#[test]
fn energy_is_linear_in_phi() {
    let cfg = FlowConfig::default();
    let base = solve_fixed_point(&params(512, 0.05), &cfg).unwrap().z_star;
    for phi in [0.25, 2.0, 7.5] {
        let p = ModelParams::new(512, 0.05, phi, 1.0).unwrap();
        let z = solve_fixed_point(&p, &cfg).unwrap().z_star;
        assert!((z - phi * base).abs() <= 1e-11 * phi, "phi={phi}");
    }
}

#[test]
fn error_shrinks_with_n() {
    let cfg = FlowConfig::default();
    let mut prev = f64::INFINITY;
    for n in [1_000u64, 10_000, 100_000, 1_000_000] {
        let p = params(n, 0.01);
        let err = (solve_fixed_point(&p, &cfg).unwrap().z_star - p.bogoliubov_energy()).abs();
        assert!(err < prev, "n={n}");
        // The observed error behaves like a constant over N.
        let scaled = err * n as f64;
        assert!(scaled > 1.0 && scaled < 5.0, "n={n}: {err}");
        prev = err;
    }
}

#[test]
fn budget_diagnostic() {
    let cfg = FlowConfig::default();
    let c = BudgetConstants::default();

    let tiny = params(2, 0.1);
    let r = solve_fixed_point(&tiny, &cfg).unwrap();
    let b = energy_error_diagnostic(&tiny, &cfg, &r, c);
    assert!(!b.regime_ok && !b.exceeds);

    let p = params(1_000_000, 0.01);
    let r = solve_fixed_point(&p, &cfg).unwrap();
    let b = energy_error_diagnostic(&p, &cfg, &r, c);
    assert!(b.regime_ok);
    assert_eq!(b.dominant, BudgetTerm::Beta);
    assert!((b.term_beta - 1e-2).abs() <= 1e-12);
    assert!((b.term_n - 1e-6).abs() <= 1e-18);
    assert!(!b.exceeds && b.measured < b.total());
}

#[test]
fn single_sign_change_in_window() {
    let cfg = FlowConfig::default();
    for (n, eps) in [(64u64, 0.5), (1024, 0.01), (4096, 0.001)] {
        let p = params(n, eps);
        let lambda0 = oracle_ground_energy(&p).unwrap();
        let w = spectral_window(&p, &cfg, None);
        for k in 0..=400 {
            let z = w.z_min + (w.z_max - w.z_min) * k as f64 / 400.0;
            let gap = (z - lambda0).abs();
            if gap < 1e-9 {
                continue;
            }
            match f_of_z(p, z) {
                Ok(f) if z < lambda0 => assert!(f > 0.0, "n={n} z={z}"),
                Ok(f) => assert!(f < 0.0, "n={n} z={z}: f={f}"),
                Err(_) => assert!(z > lambda0, "n={n} z={z}"),
            }
        }
    }
}

#[test]
fn energy_falls_with_interaction_at_fixed_kinetic_energy() {
    // ε = k²/φ: stronger interaction at fixed k² lowers z*.
    let cfg = FlowConfig::default();
    let k2 = 0.01;
    let mut prev = f64::INFINITY;
    for phi in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let p = ModelParams::new(4096, k2 / phi, phi, 1.0).unwrap();
        let z = solve_fixed_point(&p, &cfg).unwrap().z_star;
        assert!(z < prev, "phi={phi}: {z} vs {prev}");
        prev = z;
    }
}
