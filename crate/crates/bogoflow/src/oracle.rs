//! Exact reference for the symmetric pair sector: the tridiagonal sector
//! matrix, a dense ladder-operator construction to cross-check it, and an
//! eigensolver (Sturm bisection plus inverse iteration) independent of the flow.

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt::num;
use crate::model::Couplings;

/// Largest N accepted by [`dense_crosscheck`].
pub const DENSE_LIMIT: u64 = 12;

/// Real symmetric tridiagonal matrix on the pair sector.
///
/// Row k is the state with n_0 = N − 2k and k particles in each of ±j*.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalHamiltonian {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalHamiltonian {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidParams(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal",
                diag.len(),
                offdiag.len()
            )));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn offdiag_mut(&mut self) -> &mut [f64] {
        &mut self.offdiag
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let m = self.size();
        (0..m)
            .map(|i| {
                let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < m { self.offdiag[i].abs() } else { 0.0 };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let m = self.size();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..m {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < m { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// y = T x.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let m = self.size();
        assert_eq!(x.len(), m, "vector length must match matrix size");
        (0..m)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < m {
                    y += self.offdiag[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// ‖T x − λ x‖ / ‖x‖.
    pub fn residual(&self, lambda: f64, x: &[f64]) -> f64 {
        let y = self.apply(x);
        let r: f64 = y.iter().zip(x).map(|(yi, xi)| (yi - lambda * xi).powi(2)).sum();
        r.sqrt() / norm2(x)
    }

    /// Number of eigenvalues strictly below `z` (Sturm sign count).
    pub fn sturm_count(&self, z: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE * self.offdiag.iter().map(|t| t * t).fold(1.0, f64::max);
        let mut count = 0;
        let mut q = self.diag[0] - z;
        for k in 0..self.size() {
            if k > 0 {
                let t = self.offdiag[k - 1];
                q = self.diag[k] - z - t * t / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The leading `m × m` principal submatrix.
    pub fn leading(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.size() {
            return Err(Error::InvalidParams(format!("leading block size {m} out of range")));
        }
        Self::new(self.diag[..m].to_vec(), self.offdiag[..m - 1].to_vec())
    }

    /// CSV with columns `k,d_k,t_k`; the last row has an empty `t_k`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,d_k,t_k")?;
        for (k, d) in self.diag.iter().enumerate() {
            match self.offdiag.get(k) {
                Some(t) => writeln!(w, "{k},{},{}", num(*d), num(*t))?,
                None => writeln!(w, "{k},{},", num(*d))?,
            }
        }
        Ok(())
    }
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    let scale = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * x.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
}

/// Diagonal element d_k = 2k(k² + φ(N−2k)/N).
pub fn sector_diag(c: &Couplings, k: usize) -> f64 {
    let n = c.n as f64;
    let kf = k as f64;
    2.0 * kf * (c.k2 + c.phi * (n - 2.0 * kf) / n)
}

/// Off-diagonal element t_k = (φ/N)·√((N−2k)(N−2k−1))·(k+1).
pub fn sector_offdiag(c: &Couplings, k: usize) -> f64 {
    let n = c.n as f64;
    let kf = k as f64;
    (c.phi / n) * ((n - 2.0 * kf) * (n - 2.0 * kf - 1.0)).sqrt() * (kf + 1.0)
}

pub fn build_sector_hamiltonian(c: impl Into<Couplings>) -> TridiagonalHamiltonian {
    let c = c.into();
    let m = c.sector_size();
    TridiagonalHamiltonian {
        diag: (0..m).map(|k| sector_diag(&c, k)).collect(),
        offdiag: (0..m - 1).map(|k| sector_offdiag(&c, k)).collect(),
    }
}

#[derive(Clone, Copy)]
enum Ladder {
    Create(usize),
    Annihilate(usize),
}

fn apply_ops(state: [u64; 3], ops: &[Ladder]) -> Option<(f64, [u64; 3])> {
    let mut s = state;
    let mut amp = 1.0;
    for op in ops.iter().rev() {
        match *op {
            Ladder::Create(m) => {
                s[m] += 1;
                amp *= (s[m] as f64).sqrt();
            }
            Ladder::Annihilate(m) => {
                if s[m] == 0 {
                    return None;
                }
                amp *= (s[m] as f64).sqrt();
                s[m] -= 1;
            }
        }
    }
    Some((amp, s))
}

/// Occupation basis (n_0, n_+, n_-) and a row-major dense matrix.
pub type DenseSystem = (Vec<[u64; 3]>, Vec<Vec<f64>>);

/// Dense H^Bog on the full three-mode occupation basis with n_0+n_+ +n_- = N.
///
/// Returns the basis (n_0, n_+, n_-) and the row-major matrix.
pub fn dense_three_mode_matrix(c: impl Into<Couplings>) -> Result<DenseSystem> {
    use Ladder::{Annihilate as A, Create as C};
    let c = c.into();
    if c.n > DENSE_LIMIT {
        return Err(Error::TooLarge {
            n: c.n,
            limit: DENSE_LIMIT,
        });
    }
    let n = c.n;
    let mut basis = Vec::new();
    for p in 0..=n {
        for q in 0..=n - p {
            basis.push([n - p - q, p, q]);
        }
    }
    let index: HashMap<[u64; 3], usize> = basis.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let nf = n as f64;
    let terms: Vec<(f64, Vec<Ladder>)> = vec![
        (c.k2, vec![C(1), A(1)]),
        (c.k2, vec![C(2), A(2)]),
        (c.phi / nf, vec![C(0), A(0), C(1), A(1)]),
        (c.phi / nf, vec![C(0), A(0), C(2), A(2)]),
        (c.phi / nf, vec![C(1), C(2), A(0), A(0)]),
        (c.phi / nf, vec![C(0), C(0), A(1), A(2)]),
    ];
    let dim = basis.len();
    let mut h = vec![vec![0.0; dim]; dim];
    for (col, s) in basis.iter().enumerate() {
        for (coef, ops) in &terms {
            if let Some((amp, out)) = apply_ops(*s, ops) {
                h[index[&out]][col] += coef * amp;
            }
        }
    }
    Ok((basis, h))
}

/// Max absolute deviation between the dense construction, restricted to the
/// symmetric pair sector, and [`build_sector_hamiltonian`]. Leakage from the
/// sector into other states also counts as deviation.
pub fn dense_crosscheck(c: impl Into<Couplings>) -> Result<f64> {
    let c = c.into();
    let (basis, h) = dense_three_mode_matrix(c)?;
    let tri = build_sector_hamiltonian(c);
    let sector_row = |s: &[u64; 3]| (s[1] == s[2]).then_some(s[1] as usize);
    let mut dev = 0.0f64;
    for (col, sc) in basis.iter().enumerate() {
        let Some(kc) = sector_row(sc) else { continue };
        for (row, sr) in basis.iter().enumerate() {
            let expected = match sector_row(sr) {
                Some(kr) if kr == kc => tri.diag[kr],
                Some(kr) if kr + 1 == kc => tri.offdiag[kr],
                Some(kr) if kc + 1 == kr => tri.offdiag[kc],
                _ => 0.0,
            };
            dev = dev.max((h[row][col] - expected).abs());
        }
    }
    Ok(dev)
}

/// An eigenvalue with its unit eigenvector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

const MAX_BISECTION: usize = 400;

/// The `index`-th smallest eigenvalue (0-based) by Sturm bisection, to
/// absolute accuracy `tol·‖T‖∞` or machine resolution.
pub fn eigenvalue_by_index(tri: &TridiagonalHamiltonian, index: usize, tol: f64) -> Result<f64> {
    if index >= tri.size() {
        return Err(Error::InvalidParams(format!("eigenvalue index {index} out of range")));
    }
    let (mut lo, mut hi) = tri.gershgorin();
    let pad = f64::EPSILON * tri.norm_inf().max(f64::MIN_POSITIVE) + f64::MIN_POSITIVE;
    lo -= pad;
    hi += pad;
    let width = tol * tri.norm_inf();
    for _ in 0..MAX_BISECTION {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= width || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if tri.sturm_count(mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::NonConvergence {
        what: "Sturm bisection",
        iterations: MAX_BISECTION,
    })
}

/// The `m` smallest eigenvalues, ascending.
pub fn low_spectrum(tri: &TridiagonalHamiltonian, m: usize) -> Result<Vec<f64>> {
    if m == 0 || m > tri.size() {
        return Err(Error::InvalidParams(format!("m = {m} outside 1..={}", tri.size())));
    }
    (0..m).map(|i| eigenvalue_by_index(tri, i, f64::EPSILON)).collect()
}

/// One solve of (T − λI) x = b with partial pivoting (LU with row
/// interchanges, as in the LAPACK gttrf/gttrs pair).
fn shifted_solve(tri: &TridiagonalHamiltonian, lambda: f64, rhs: &mut [f64]) {
    let n = tri.size();
    let floor = f64::EPSILON * tri.norm_inf().max(f64::MIN_POSITIVE);
    let mut d: Vec<f64> = tri.diag.iter().map(|v| v - lambda).collect();
    if n == 1 {
        if d[0].abs() < floor {
            d[0] = floor;
        }
        rhs[0] /= d[0];
        return;
    }
    let mut dl = tri.offdiag.clone();
    let mut du = tri.offdiag.clone();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut swapped = vec![false; n - 1];
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i].abs() < floor {
                d[i] = floor;
            }
            let fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -fact;
            }
            swapped[i] = true;
        }
    }
    if d[n - 1].abs() < floor {
        d[n - 1] = floor;
    }
    for i in 0..n - 1 {
        if swapped[i] {
            let temp = rhs[i];
            rhs[i] = rhs[i + 1];
            rhs[i + 1] = temp - dl[i] * rhs[i];
        } else {
            rhs[i + 1] -= dl[i] * rhs[i];
        }
    }
    rhs[n - 1] /= d[n - 1];
    rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
    for i in (0..n.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
    }
}

fn normalize_signed(v: &mut [f64]) {
    let nrm = norm2(v);
    let sign = match v.iter().find(|x| **x != 0.0) {
        Some(x) if *x < 0.0 => -1.0,
        _ => 1.0,
    };
    for x in v.iter_mut() {
        *x = sign * *x / nrm;
    }
}

/// Eigenvector for an eigenvalue estimate by inverse iteration, normalized
/// with the first nonzero component positive.
pub fn inverse_iteration(tri: &TridiagonalHamiltonian, lambda: f64, max_iter: usize) -> Result<EigenPair> {
    let target = 1e-10 * tri.norm_inf().max(f64::MIN_POSITIVE);
    let mut v = vec![1.0; tri.size()];
    for _ in 0..max_iter.max(1) {
        shifted_solve(tri, lambda, &mut v);
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonConvergence {
                what: "inverse iteration",
                iterations: max_iter,
            });
        }
        normalize_signed(&mut v);
        let residual = tri.residual(lambda, &v);
        if residual <= target {
            return Ok(EigenPair {
                value: lambda,
                vector: v,
                residual,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "inverse iteration",
        iterations: max_iter,
    })
}

/// Ground eigenpair: Sturm bisection for the value, inverse iteration for
/// the vector.
pub fn lowest_eigenpair(tri: &TridiagonalHamiltonian, tol: f64) -> Result<EigenPair> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!("tolerance must be positive (got {tol})")));
    }
    let value = eigenvalue_by_index(tri, 0, tol)?;
    inverse_iteration(tri, value, 4)
}

/// Schur complement of `T − z` onto the first basis state, evaluated
/// directly as the continued fraction d_0 − z − t_0²/(d_1 − z − t_1²/(…)).
pub fn schur_complement_first(tri: &TridiagonalHamiltonian, z: f64) -> f64 {
    let m = tri.size();
    let mut denom = tri.diag[m - 1] - z;
    for k in (0..m - 1).rev() {
        let t = tri.offdiag[k];
        denom = tri.diag[k] - z - t * t / denom;
    }
    denom
}
