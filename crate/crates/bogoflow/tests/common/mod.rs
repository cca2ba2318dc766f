//! Reference implementations shared by the integration tests. Nothing here
//! calls into the crate's numerics.

#![allow(dead_code)]

/// Sector matrix straight from the closed-form elements:
/// d_k = 2k(εφ + φ(N−2k)/N), t_k = (φ/N)√((N−2k)(N−2k−1))(k+1).
pub fn sector_matrix(n: u64, eps: f64, phi: f64) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let m = (n / 2 + 1) as usize;
    let d = (0..m)
        .map(|k| {
            let k = k as f64;
            2.0 * k * (eps * phi + phi * (nf - 2.0 * k) / nf)
        })
        .collect();
    let t = (0..m - 1)
        .map(|k| {
            let k = k as f64;
            phi / nf * ((nf - 2.0 * k) * (nf - 2.0 * k - 1.0)).sqrt() * (k + 1.0)
        })
        .collect();
    (d, t)
}

/// All eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts, sorted ascending.
pub fn ql_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 100, "QL did not converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    d
}

/// E^Bog/φ = −(ε + 1 − √(ε² + 2ε)), evaluated in the cancellation-free form
/// −1/(ε + 1 + √(ε² + 2ε)).
pub fn e_bog_reference(eps: f64) -> f64 {
    -1.0 / (eps + 1.0 + (eps * eps + 2.0 * eps).sqrt())
}

/// −z − t_0²/(d_1 − z − t_1²/(d_2 − z − …)) evaluated top-down with
/// modified Lentz, independent of the bottom-up evaluation in the crate.
pub fn schur_lentz(d: &[f64], t: &[f64], z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    // b_0 + a_1/(b_1 + a_2/(b_2 + ...)), b_k = d_k − z, a_k = −t_{k−1}².
    let mut f = d[0] - z;
    if f == 0.0 {
        f = TINY;
    }
    let mut c = f;
    let mut dd = 0.0;
    for k in 1..d.len() {
        let a = -t[k - 1] * t[k - 1];
        let b = d[k] - z;
        dd = b + a * dd;
        if dd == 0.0 {
            dd = TINY;
        }
        c = b + a / c;
        if c == 0.0 {
            c = TINY;
        }
        dd = 1.0 / dd;
        let delta = c * dd;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    f
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
