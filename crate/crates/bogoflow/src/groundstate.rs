//! Ground-state vector from the flow, its tail series, the K/Z truncation
//! estimates, and the truncated-flow decay experiment.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::cnumber_flow::{g_check, g_top, power_window, truncation_start, FlowTable};
use crate::error::{Error, Result};
use crate::fmt::num;
use crate::model::{bogoliubov_energy, CoefficientSet, Couplings, FlowConfig, ModelParams};
use crate::oracle::{build_sector_hamiltonian, norm2, TridiagonalHamiltonian};
use crate::stats::{linear_fit, LinearFit};

/// Largest N for which the expansion keeps every coefficient by default.
pub const FULL_EXPANSION_LIMIT: u64 = 100_000;

/// Relative cut-off of the adaptive expansion used above [`FULL_EXPANSION_LIMIT`].
pub const ADAPTIVE_CUTOFF: f64 = 1e-18;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateVector {
    /// ψ_k for k = 0..=k_max, with ψ_0 = 1.
    pub coeffs: Vec<f64>,
    pub z_star: f64,
    /// Spectral parameter the flow was evaluated at (differs from `z_star`
    /// only when the fallback was taken).
    pub eval_z: f64,
    pub fallback: bool,
    /// Bound on the norm of the omitted coefficients (0 for the full sector).
    pub tail_bound: f64,
    pub overlap_oracle: Option<f64>,
}

impl GroundStateVector {
    pub fn k_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Unit-norm copy; the first component stays positive.
    pub fn normalized(&self) -> Vec<f64> {
        let n = norm2(&self.coeffs);
        self.coeffs.iter().map(|c| c / n).collect()
    }

    /// |⟨ψ, v⟩|/(‖ψ‖‖v‖), with ψ zero-padded to the length of v.
    pub fn overlap(&self, v: &[f64]) -> f64 {
        let dot: f64 = self.coeffs.iter().zip(v).map(|(a, b)| a * b).sum();
        dot.abs() / (norm2(&self.coeffs) * norm2(v))
    }

    /// Stores and returns the overlap with an oracle eigenvector.
    pub fn attach_oracle(&mut self, v: &[f64]) -> f64 {
        let o = self.overlap(v);
        self.overlap_oracle = Some(o);
        o
    }

    /// ‖Tψ − z*ψ‖/‖ψ‖ for ψ zero-padded to the sector size.
    pub fn residual(&self, tri: &TridiagonalHamiltonian) -> f64 {
        let mut psi = self.coeffs.clone();
        psi.resize(tri.size(), 0.0);
        tri.residual(self.z_star, &psi)
    }

    /// CSV with columns `k,psi_k,oracle_v_k,abs_diff` (normalized ψ).
    pub fn write_csv<W: Write>(&self, oracle: &[f64], mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,psi_k,oracle_v_k,abs_diff")?;
        let psi = self.normalized();
        for (k, v) in oracle.iter().enumerate() {
            let p = psi.get(k).copied().unwrap_or(0.0);
            writeln!(w, "{k},{},{},{}", num(p), num(*v), num((p - v).abs()))?;
        }
        Ok(())
    }
}

fn coefficients_from_table(tri: &TridiagonalHamiltonian, table: &FlowTable, n: u64, z: f64, k_max: usize) -> Vec<f64> {
    let d = tri.diag();
    let t = tri.offdiag();
    let mut psi = Vec::with_capacity(k_max + 1);
    psi.push(1.0);
    for k in 0..k_max {
        let level = n as usize - 2 * (k + 1);
        let g = table.g_at(level).expect("flow table covers every level");
        let next = -g * t[k] / (d[k + 1] - z) * psi[k];
        psi.push(next);
    }
    psi
}

fn adaptive_length(psi: &[f64]) -> usize {
    let mut sumsq = 0.0;
    for (k, p) in psi.iter().enumerate() {
        sumsq += p * p;
        if k > 0 && p.abs() < ADAPTIVE_CUTOFF * sumsq.sqrt() {
            return k;
        }
    }
    psi.len() - 1
}

/// Expands the ground state: ψ_0 = 1, ψ_{k+1} = −Ǧ_{N−2(k+1)}(z*)·t_k/(d_{k+1} − z*)·ψ_k.
///
/// `k_max = None` keeps the full sector up to N = 10⁵ and stops adaptively
/// (|ψ_k| < 1e−18‖ψ‖) above. If the flow is not valid at z*, it is
/// evaluated at z* − 10·tol and z* − 20·tol and linearly extrapolated back.
pub fn expand_ground_state(
    params: &ModelParams,
    cfg: &FlowConfig,
    z_star: f64,
    k_max: Option<usize>,
) -> Result<GroundStateVector> {
    let c: Couplings = params.into();
    let full = (params.n() / 2) as usize;
    if let Some(k) = k_max {
        if k > full {
            return Err(Error::InvalidParams(format!("k_max {k} exceeds N/2 = {full}")));
        }
    }
    let tri = build_sector_hamiltonian(c);
    let k_run = k_max.unwrap_or(full);

    let direct = g_check(c, z_star, 0).ok().filter(|t| t.valid);
    let (mut coeffs, eval_z, fallback) = match direct {
        Some(table) => (coefficients_from_table(&tri, &table, c.n, z_star, k_run), z_star, false),
        None => {
            let h = 10.0 * cfg.tol_root * params.phi();
            let (z1, z2) = (z_star - h, z_star - 2.0 * h);
            let t1 = g_check(c, z1, 0)?;
            let t2 = g_check(c, z2, 0)?;
            if !(t1.valid && t2.valid) {
                return Err(Error::FlowInvalid {
                    z: z1,
                    level: t1.failed_level.or(t2.failed_level).unwrap_or(0),
                    ratio: 1.0,
                });
            }
            let p1 = coefficients_from_table(&tri, &t1, c.n, z1, k_run);
            let p2 = coefficients_from_table(&tri, &t2, c.n, z2, k_run);
            let psi = p1.iter().zip(&p2).map(|(a, b)| 2.0 * a - b).collect();
            (psi, z1, true)
        }
    };

    let mut tail_bound = 0.0;
    if k_max.is_none() && params.n() > FULL_EXPANSION_LIMIT {
        let stop = adaptive_length(&coeffs);
        coeffs.truncate(stop + 1);
        if stop < full {
            let series = tail_series(params, cfg, stop + 2);
            let r = series.ratio(stop + 1).unwrap_or(f64::INFINITY);
            tail_bound = if r < 1.0 {
                coeffs[stop].abs() * r / (1.0 - r * r).sqrt()
            } else {
                f64::INFINITY
            };
        }
    } else if k_run < full {
        let series = tail_series(params, cfg, k_run + 2);
        let r = series.ratio(k_run + 1).unwrap_or(f64::INFINITY);
        tail_bound = if r < 1.0 {
            coeffs[k_run].abs() * r / (1.0 - r * r).sqrt()
        } else {
            f64::INFINITY
        };
    }

    Ok(GroundStateVector {
        coeffs,
        z_star,
        eval_z,
        fallback,
        tail_bound,
        overlap_oracle: None,
    })
}

/// The series c_j and its ratios c_j/c_{j−1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailSeries {
    /// c_j for j = 1..=j_max (c_1 = 1, the empty product).
    pub c: Vec<f64>,
    /// Smallest j₀ with c_j/c_{j−1} < 1 for every j ≥ j₀ in range.
    pub threshold: Option<usize>,
    /// Partial sums Σ_{j≤J} c_j.
    pub partial_sums: Vec<f64>,
}

impl TailSeries {
    /// c_j, 1-based.
    pub fn term(&self, j: usize) -> Option<f64> {
        j.checked_sub(1).and_then(|i| self.c.get(i)).copied()
    }

    /// c_j/c_{j−1} for j ≥ 2.
    pub fn ratio(&self, j: usize) -> Option<f64> {
        if j < 2 {
            return None;
        }
        Some(self.term(j)? / self.term(j - 1)?)
    }
}

/// One factor 1/([1+√(ηa) − (b/√(ηa))/(2l−ξ)]·[1+a−2b/(2l−1)−(1−c)/(2l−1)²]^{1/2}).
pub fn tail_ratio(co: &CoefficientSet, l: usize) -> f64 {
    let (a, b, c) = (co.a_bound, co.b_delta, co.c_delta);
    let root = (co.eta * a).sqrt();
    let l2 = 2.0 * l as f64;
    let first = 1.0 + root - (b / root) / (l2 - co.xi);
    let m = l2 - 1.0;
    let second = 1.0 + a - 2.0 * b / m - (1.0 - c) / (m * m);
    if first <= 0.0 || second <= 0.0 {
        return f64::INFINITY;
    }
    1.0 / (first * second.sqrt())
}

/// c_j = Π_{l=2..j} of [`tail_ratio`], with a = a_bound and b, c at δ = 1 + √ε.
pub fn tail_series(params: &ModelParams, cfg: &FlowConfig, j_max: usize) -> TailSeries {
    let eps = params.epsilon();
    let co = CoefficientSet::compute(params.n(), eps, 1.0 + eps.sqrt(), cfg);
    let mut c = Vec::with_capacity(j_max);
    let mut partial_sums = Vec::with_capacity(j_max);
    let mut threshold = None;
    let mut term = 1.0;
    let mut sum = 0.0;
    for j in 1..=j_max.max(1) {
        if j >= 2 {
            let r = tail_ratio(&co, j);
            term *= r;
            if r < 1.0 {
                threshold.get_or_insert(j);
            } else {
                threshold = None;
            }
        }
        sum += term;
        c.push(term);
        partial_sums.push(sum);
    }
    TailSeries {
        c,
        threshold,
        partial_sums,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationBounds {
    pub r: usize,
    pub i: usize,
    pub h: u32,
    /// Even levels r..=i.
    pub levels: Vec<usize>,
    /// K_{f,ε} at each level.
    pub k: Vec<f64>,
    /// Z_{f,ε} at each level.
    pub z: Vec<f64>,
    /// Π_{f=r+2..i} K_f/(1 − Z_{f−2})².
    pub product: f64,
    /// Z_r^h · product.
    pub remainder: f64,
}

/// K_{f,ε} = 1/(4(1 + a − 2b/(N−f+1) − (1−c)/(N−f+1)²)).
pub fn k_estimate(n: u64, co: &CoefficientSet, f: usize) -> f64 {
    let m = (n as usize - f + 1) as f64;
    1.0 / (4.0 * (1.0 + co.a_bound - 2.0 * co.b_delta / m - (1.0 - co.c_delta) / (m * m)))
}

/// Z_{f,ε} = K_{f,ε}·2/[1 + √(ηa) − (b/√(ηa))/(N − f + 2 − ξ)].
pub fn z_estimate(n: u64, co: &CoefficientSet, f: usize) -> f64 {
    let root = (co.eta * co.a_bound).sqrt();
    let m = (n as usize - f + 2) as f64;
    k_estimate(n, co, f) * 2.0 / (1.0 + root - (co.b_delta / root) / (m - co.xi))
}

/// K/Z estimates on even levels r..=i with re-expansion depth h.
pub fn kz_truncation_bounds(
    params: &ModelParams,
    cfg: &FlowConfig,
    r: usize,
    i: usize,
    h: u32,
) -> Result<TruncationBounds> {
    let n = params.n() as usize;
    if r % 2 == 1 || i % 2 == 1 || r < 2 || r + 2 > i || i + 2 > n || h < 2 {
        return Err(Error::InvalidParams(format!(
            "need even 2 <= r <= i-2, i <= N-2, h >= 2 (r={r}, i={i}, h={h}, N={n})"
        )));
    }
    let eps = params.epsilon();
    let co = CoefficientSet::compute(params.n(), eps, 1.0 + eps.sqrt(), cfg);
    let levels: Vec<usize> = (r..=i).step_by(2).collect();
    let k: Vec<f64> = levels.iter().map(|&f| k_estimate(params.n(), &co, f)).collect();
    let z: Vec<f64> = levels.iter().map(|&f| z_estimate(params.n(), &co, f)).collect();
    let product: f64 = (1..levels.len())
        .map(|idx| k[idx] / (1.0 - z[idx - 1]).powi(2))
        .product();
    Ok(TruncationBounds {
        r,
        i,
        h,
        remainder: z[0].powi(h as i32) * product,
        levels,
        k,
        z,
        product,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayPoint {
    pub n: u64,
    /// Truncation window N − i₀ = ⌊N^(1−β)⌋ (even).
    pub window: usize,
    pub g_full: f64,
    pub g_truncated: f64,
    pub diff: f64,
    /// Whether the point entered the fit (above the roundoff floor, new window).
    pub fitted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub epsilon: f64,
    pub beta: f64,
    pub z: f64,
    pub points: Vec<DecayPoint>,
    /// Fit of ln|Ǧ − Ǧ_T| against the window length.
    pub fit: Option<LinearFit>,
    /// c from slope = −ln(1 + c√ε).
    pub c_fit: Option<f64>,
    /// c predicted by the linearized contraction of the δ = 1 recursion.
    pub c_pred: f64,
}

/// Differences below this fraction of Ǧ are roundoff and stay out of the fit.
pub const DECAY_FLOOR: f64 = 1e-12;

/// Slope per level of ln|Ǧ − Ǧ_T| predicted by the recursion's contraction
/// factor 1/(4(1+a′)Y*²) at its fixed point Y*.
pub fn predicted_decay_slope(epsilon: f64) -> f64 {
    let a = epsilon * epsilon + 2.0 * epsilon;
    let y = 0.5 * (1.0 + (a / (1.0 + a)).sqrt());
    (1.0 / (4.0 * (1.0 + a) * y * y)).ln() / 2.0
}

/// Measures |Ǧ − Ǧ_T| at z (default E^Bog) over `n_grid` and fits its
/// logarithm against the truncation window.
pub fn gamma_truncation_experiment(
    epsilon: f64,
    phi: f64,
    beta: f64,
    n_grid: &[u64],
    z: Option<f64>,
) -> Result<DecayReport> {
    let z = z.unwrap_or_else(|| bogoliubov_energy(epsilon, phi));
    let mut points = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for &n in n_grid {
        let params = ModelParams::new(n, epsilon, phi, 1.0)?;
        let window = power_window(n, 1.0 - beta);
        if window < 4 {
            continue;
        }
        let g_full = g_top(params, z, 0)?;
        let g_truncated = g_top(params, z, truncation_start(n, beta))?;
        let diff = (g_full - g_truncated).abs();
        let fitted = diff > DECAY_FLOOR * g_full && seen.insert(window);
        points.push(DecayPoint {
            n,
            window,
            g_full,
            g_truncated,
            diff,
            fitted,
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|p| p.fitted)
        .map(|p| (p.window as f64, p.diff.ln()))
        .unzip();
    let fit = linear_fit(&xs, &ys);
    let se = epsilon.sqrt();
    Ok(DecayReport {
        epsilon,
        beta,
        z,
        c_fit: fit.map(|f| ((-f.slope).exp() - 1.0) / se),
        c_pred: ((-predicted_decay_slope(epsilon)).exp() - 1.0) / se,
        points,
        fit,
    })
}
