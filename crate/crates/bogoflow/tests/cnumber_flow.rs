mod common;

use bogoflow::cnumber_flow::{
    f_prefactor, g_truncated, key_estimate, level_to_pair, power_window, truncation_start, w_product, y_star_sequence,
};
use bogoflow::model::{bog_root, FlowConfig};
use bogoflow::sequences::xtilde_sequence;
use bogoflow::spectrum::oracle_ground_energy;
use bogoflow::{f_of_z, g_check, g_top, Couplings, Error, ModelParams};
use common::{rel, schur_lentz, sector_matrix};

fn params(n: u64, eps: f64) -> ModelParams {
    ModelParams::new(n, eps, 1.0, 1.0).unwrap()
}

#[test]
fn w_product_vanishes_far_below() {
    let p = params(64, 0.05);
    let mut prev = f64::INFINITY;
    for k in 2..8 {
        let z = -10f64.powi(k);
        let w = w_product(p, 10, z).unwrap();
        assert!(w >= 0.0 && w < prev);
        prev = w;
    }
    assert!(prev < 1e-9);
}

#[test]
fn w_product_matches_matrix_elements() {
    let (n, eps) = (4u64, 0.01);
    let p = params(n, eps);
    let (d, t) = sector_matrix(n, eps, 1.0);
    let z = p.bogoliubov_energy();
    // Level 2 couples pair indices k = 1 and k + 1 = 2 through t_1.
    let k = level_to_pair(n, 2);
    assert_eq!(k, 1);
    let want = t[k] * t[k] / ((d[k] - z) * (d[k + 1] - z));
    assert!(rel(w_product(p, 2, z).unwrap(), want) <= 1e-13);

    for n in [16u64, 200] {
        let p = params(n, 0.1);
        let (d, t) = sector_matrix(n, 0.1, 1.0);
        for level in (2..=n as usize - 2).step_by(2) {
            let k = level_to_pair(n, level);
            let want = t[k] * t[k] / ((d[k] - z) * (d[k + 1] - z));
            assert!(
                rel(w_product(p, level, z).unwrap(), want) <= 1e-13,
                "n={n} level={level}"
            );
        }
    }
}

#[test]
fn prefactor_is_the_first_coupling() {
    for n in [4u64, 50, 1000] {
        let p = params(n, 0.02);
        let (d, t) = sector_matrix(n, 0.02, 1.0);
        for k in 0..20 {
            let z = -3.0 + 0.1 * k as f64;
            let want = t[0] * t[0] / (d[1] - z);
            assert!(rel(f_prefactor(p, z).unwrap(), want) <= 1e-14, "n={n} z={z}");
        }
    }
}

#[test]
fn level_arguments_are_checked() {
    let p = params(16, 0.1);
    assert!(w_product(p, 3, -1.0).is_err());
    assert!(w_product(p, 0, -1.0).is_err());
    assert!(w_product(p, 16, -1.0).is_err());
    assert!(g_check(p, -1.0, 5).is_err());
}

#[test]
fn pole_proximity_is_reported() {
    let p = params(16, 0.1);
    let (d, _) = sector_matrix(16, 0.1, 1.0);
    // Level 14 has k = 1, so its first denominator vanishes at z = d_1.
    let err = w_product(p, 14, d[1]).unwrap_err();
    assert!(matches!(err, Error::PoleProximity { level: 14, .. }), "{err}");
}

#[test]
fn table_starts_at_one_and_stays_above_one() {
    let p = params(4, 0.01);
    let z = oracle_ground_energy(&p).unwrap() - 0.01;
    let t = g_check(p, z, 0).unwrap();
    assert!(t.valid);
    assert_eq!(t.g_values[0], 1.0);
    assert!(t.g_values.iter().all(|g| (1.0..=2.0).contains(g)));
    assert_eq!(t.g_values.len(), 2);

    let big = params(2000, 0.01);
    let z = oracle_ground_energy(&big).unwrap() - 1e-6;
    let t = g_check(big, z, 0).unwrap();
    assert!(t.valid && t.failed_level.is_none());
    assert!(t.g_values.iter().all(|&g| g >= 1.0));
    assert_eq!(t.top(), Some(g_top(big, z, 0).unwrap()));
    assert_eq!(t.g_at(2), Some(t.g_values[1]));
    assert_eq!(t.g_at(3), None);
}

#[test]
fn no_interaction_gives_unit_table() {
    let c = Couplings::new(40, 0.3, 0.0).unwrap();
    let t = g_check(c, -1.0, 0).unwrap();
    assert!(t.g_values.iter().all(|&g| g == 1.0));
    assert!(t.w_products.iter().all(|&w| w == 0.0));
}

#[test]
fn invalid_flow_is_flagged_not_thrown() {
    let p = params(64, 0.05);
    let lambda0 = oracle_ground_energy(&p).unwrap();
    // Above the ground energy some partial continued fraction changes sign.
    let mut found = false;
    for k in 1..200 {
        let z = lambda0 + 0.01 * k as f64;
        if let Ok(t) = g_check(p, z, 0) {
            if !t.valid {
                assert!(t.failed_level.is_some() && t.f_value.is_none());
                assert!(matches!(g_top(p, z, 0), Err(Error::FlowInvalid { .. })));
                found = true;
                break;
            }
        }
    }
    assert!(found);
}

#[test]
fn f_far_below_is_minus_z() {
    let p = params(128, 0.01);
    let z = -1e3;
    let f = f_of_z(p, z).unwrap();
    assert!(f > 0.0);
    assert!((f + z).abs() <= 2.0 / z.abs());
}

#[test]
fn f_vanishes_at_oracle_energy() {
    let p = params(128, 0.01);
    let lambda0 = oracle_ground_energy(&p).unwrap();
    assert!(f_of_z(p, lambda0).unwrap().abs() <= 1e-10);
}

#[test]
fn f_slope_at_most_minus_one() {
    let p = params(256, 0.05);
    let lambda0 = oracle_ground_energy(&p).unwrap();
    let h = 1e-6;
    for k in 1..60 {
        let z = lambda0 - 5.0 * (k as f64 / 60.0).powi(3) - 2.0 * h;
        let s = (f_of_z(p, z + h).unwrap() - f_of_z(p, z).unwrap()) / h;
        assert!(s <= -1.0 + 1e-8, "z={z}: slope {s}");
    }
}

#[test]
fn f_equals_schur_complement() {
    for n in [2u64, 16, 1024, 100_000] {
        for eps in [0.5, 0.01] {
            let p = params(n, eps);
            let (d, t) = sector_matrix(n, eps, 1.0);
            let lambda0 = oracle_ground_energy(&p).unwrap();
            for j in 0..20 {
                let z = lambda0 - 10f64.powf(-(j as f64) / 2.0);
                let f = f_of_z(p, z).unwrap();
                let s = schur_lentz(&d, &t, z);
                assert!(
                    (f - s).abs() <= 1e-12 * (z.abs() + (f + z).abs()),
                    "n={n} eps={eps} z={z}"
                );
            }
        }
    }
}

#[test]
fn truncated_flow_examples() {
    let p = params(10_000, 0.04);
    let z = p.bogoliubov_energy();
    let full = g_top(p, z, 0).unwrap();
    assert!((full - g_truncated(p, z, 0.5).unwrap()).abs() <= 1e-8);
    assert!((full - g_truncated(p, z, 0.75).unwrap()).abs() > 1e-4);
    // β → 0: the window is all of N and the recursions coincide.
    assert_eq!(truncation_start(10_000, 1e-13), 0);
    assert_eq!(g_truncated(p, z, 1e-13).unwrap(), full);
    assert!(g_truncated(params(10_000, 0.04), z, 0.9).is_err());
}

#[test]
fn power_window_snaps_exact_powers() {
    assert_eq!(power_window(1_000_000, 1.0 / 3.0), 100);
    assert_eq!(power_window(1_000_000, 2.0 / 3.0), 10_000);
    assert_eq!(power_window(2_097_152, 2.0 / 3.0), 16_384);
    assert_eq!(power_window(1000, 0.5), 30);
    assert_eq!(power_window(10, 1.0), 10);
}

#[test]
fn y_star_examples() {
    let p = params(1_000_000, 0.01);
    let y = y_star_sequence(&p, 2.0 / 3.0);
    assert_eq!(y.entries.last().unwrap(), &(102, 1.0));
    assert_eq!(y.entries[0].0, 2);
    assert!(y.positive);
    assert!(y.entries.iter().all(|&(_, v)| v > 0.0 && v <= 1.0));
    let g = g_top(p, p.bogoliubov_energy(), 0).unwrap();
    let tol = 2e-2 / 0.01f64.sqrt() * 1e6f64.powf(-2.0 / 3.0);
    assert!((y.terminal() - 1.0 / g).abs() <= tol);
}

#[test]
fn key_estimate_holds() {
    for eps in [0.1, 0.04, 0.01] {
        for n in [1024u64, 4096] {
            let p = params(n, eps);
            let list = key_estimate(&p, 1.0 + eps.sqrt()).unwrap();
            assert_eq!(list.len(), n as usize / 2 - 1);
            for k in list {
                assert!(
                    k.w_product <= k.bound * (1.0 + 1e-14),
                    "n={n} eps={eps} level={}",
                    k.level
                );
            }
        }
    }
}

#[test]
fn g_monotone_in_z() {
    let p = params(512, 0.02);
    let lambda0 = oracle_ground_energy(&p).unwrap();
    let mut prev = g_check(p, lambda0 - 2.0, 0).unwrap();
    for k in 1..40 {
        let z = lambda0 - 2.0 + 2.0 * k as f64 / 40.5;
        let t = g_check(p, z, 0).unwrap();
        for (a, b) in prev.g_values.iter().zip(&t.g_values) {
            assert!(b - a >= -1e-12);
        }
        prev = t;
    }
}

#[test]
fn g_dominates_inverse_xtilde() {
    // Ǧ_i ≥ 1/X̃_i on the X̃ window, at z = E^Bog + (δ − 1)φ√(ε² + 2ε).
    let cfg = FlowConfig::default();
    for (eps, m) in [(0.04f64, 120u64), (0.01, 204)] {
        let n = m.pow(3);
        let p = params(n, eps);
        let lo = 1.0 + (2.0 * 2f64.sqrt() + 3.0) / 6.0 * eps.sqrt();
        for delta in [lo, 1.0 + eps.sqrt()] {
            let c = FlowConfig {
                delta: Some(delta),
                ..cfg
            };
            let z = p.bogoliubov_energy() + (delta - 1.0) * bog_root(eps);
            let table = g_check(p, z, 0).unwrap();
            assert!(table.valid);
            for e in xtilde_sequence(&p, &c).entries {
                let g = table.g_at(e.index).unwrap();
                assert!(g >= 1.0 / e.value, "eps={eps} delta={delta} i={}", e.index);
            }
        }
    }
}
