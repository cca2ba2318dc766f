use bogoflow::groundstate::{gamma_truncation_experiment, kz_truncation_bounds, predicted_decay_slope, tail_series};
use bogoflow::oracle::lowest_eigenpair;
use bogoflow::{build_sector_hamiltonian, expand_ground_state, solve_fixed_point, FlowConfig, ModelParams};

fn params(n: u64, eps: f64) -> ModelParams {
    ModelParams::new(n, eps, 1.0, 1.0).unwrap()
}

fn solved(n: u64, eps: f64) -> (ModelParams, f64) {
    let p = params(n, eps);
    let z = solve_fixed_point(&p, &FlowConfig::default()).unwrap().z_star;
    (p, z)
}

#[test]
fn leading_coefficient_is_one() {
    let cfg = FlowConfig::default();
    let (p, z) = solved(256, 0.05);
    let psi = expand_ground_state(&p, &cfg, z, None).unwrap();
    assert_eq!(psi.coeffs[0], 1.0);
    assert_eq!(psi.k_max(), 128);
    assert_eq!(psi.tail_bound, 0.0);
    let norm: f64 = psi.normalized().iter().map(|x| x * x).sum();
    assert!((norm - 1.0).abs() <= 1e-14);
}

#[test]
fn overlap_with_oracle() {
    let cfg = FlowConfig::default();
    for eps in [0.5, 0.1, 0.01, 0.001] {
        let (p, z) = solved(128, eps);
        let mut psi = expand_ground_state(&p, &cfg, z, None).unwrap();
        let oracle = lowest_eigenpair(&build_sector_hamiltonian(p), f64::EPSILON).unwrap();
        let ov = psi.attach_oracle(&oracle.vector);
        assert!(ov >= 1.0 - 1e-10, "eps={eps}: {ov}");
        assert_eq!(psi.overlap_oracle, Some(ov));
        let tri = build_sector_hamiltonian(p);
        assert!(psi.residual(&tri) / tri.norm_inf() <= 1e-10, "eps={eps}");
    }
}

#[test]
fn state_does_not_depend_on_overall_scale() {
    // φ multiplies the whole Hamiltonian, so tiny φ must give the same state.
    let cfg = FlowConfig::default();
    let (p, z) = solved(64, 0.1);
    let reference = expand_ground_state(&p, &cfg, z, None).unwrap().normalized();
    let small = ModelParams::new(64, 0.1, 1e-8, 1.0).unwrap();
    let zs = solve_fixed_point(&small, &cfg).unwrap().z_star;
    assert!((zs - 1e-8 * z).abs() <= 1e-20);
    let v = expand_ground_state(&small, &cfg, zs, None).unwrap().normalized();
    for (a, b) in v.iter().zip(&reference) {
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn interaction_off_leaves_vacuum() {
    // φ → 0 at fixed k² = εφ: the pair couplings vanish and ψ_k → 0 for k ≥ 1.
    let cfg = FlowConfig::default();
    let k2 = 0.01;
    for phi in [1e-4, 1e-8] {
        let p = ModelParams::new(64, k2 / phi, phi, 1.0).unwrap();
        let z = solve_fixed_point(&p, &cfg).unwrap().z_star;
        let v = expand_ground_state(&p, &cfg, z, None).unwrap().normalized();
        assert!(v[1..].iter().all(|x| x.abs() <= phi / k2), "phi={phi}");
    }
}

#[test]
fn tail_series_shape() {
    let cfg = FlowConfig::default();
    let s = tail_series(&params(4096, 0.01), &cfg, 400);
    assert_eq!(s.term(1), Some(1.0));
    assert_eq!(s.ratio(1), None);
    assert_eq!(s.c.len(), 400);
    let j0 = s.threshold.unwrap();
    for j in j0.max(2)..=400 {
        assert!(s.ratio(j).unwrap() < 1.0);
    }
    assert!(s.partial_sums.windows(2).all(|w| w[1] >= w[0]));

    // Weaker coupling decays more slowly, so the series sums to more.
    let weak = tail_series(&params(4096, 0.001), &cfg, 400);
    assert!(weak.partial_sums[399] > s.partial_sums[399]);
}

#[test]
fn truncated_expansion_tail_bound() {
    let cfg = FlowConfig::default();
    for eps in [0.1, 0.04, 0.01] {
        let (p, z) = solved(2048, eps);
        let oracle = lowest_eigenpair(&build_sector_hamiltonian(p), f64::EPSILON).unwrap();
        let scale = oracle.vector[0];
        for k_max in [20usize, 60, 200] {
            let psi = expand_ground_state(&p, &cfg, z, Some(k_max)).unwrap();
            assert_eq!(psi.coeffs.len(), k_max + 1);
            let tail: f64 = oracle.vector[k_max + 1..]
                .iter()
                .map(|x| (x / scale).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(psi.tail_bound.is_finite() && psi.tail_bound > 0.0);
            // The oracle vector carries a rounding floor near 1e-15.
            assert!(
                tail <= psi.tail_bound * (1.0 + 1e-9) + 1e-13,
                "eps={eps} k_max={k_max}: {tail} vs {}",
                psi.tail_bound
            );
        }
    }
    let (p, z) = solved(64, 0.1);
    assert!(expand_ground_state(&p, &cfg, z, Some(33)).is_err());
}

#[test]
fn kz_estimates_below_one() {
    let cfg = FlowConfig::default();
    for eps in [0.04, 0.01] {
        let p = params(4096, eps);
        let b = kz_truncation_bounds(&p, &cfg, 2, 4094, 8).unwrap();
        assert_eq!(b.levels.len(), 2047);
        assert!(b.z.iter().all(|&z| z > 0.0 && z < 1.0));
        assert!(b.k.iter().all(|&k| k > 0.0 && k.is_finite()));
        assert!(b.remainder.is_finite());
    }
    let p = params(64, 0.1);
    assert!(kz_truncation_bounds(&p, &cfg, 3, 20, 4).is_err());
    assert!(kz_truncation_bounds(&p, &cfg, 2, 64, 4).is_err());
    assert!(kz_truncation_bounds(&p, &cfg, 2, 20, 1).is_err());
}

#[test]
fn truncation_decay_constant() {
    let grid: Vec<u64> = bogoflow::cli::verify::decay_n_grid();
    for eps in [0.04, 0.01] {
        let r = gamma_truncation_experiment(eps, 1.0, 2.0 / 3.0, &grid, None).unwrap();
        let fit = r.fit.unwrap();
        assert!(fit.slope < 0.0 && fit.r2 >= 0.95, "eps={eps}: {fit:?}");
        let c = r.c_fit.unwrap();
        assert!(
            c > r.c_pred / 10.0 && c < r.c_pred * 10.0,
            "eps={eps}: c={c} pred={}",
            r.c_pred
        );
        assert!(predicted_decay_slope(eps) < 0.0);
    }
}
