//! The Feshbach-Schur flow in scalar form.
//!
//! Flow level `i` is the zero-mode occupation n_0 = i. It corresponds to the
//! sector pair index k = (N − i)/2 of [`crate::oracle`]. The recursion runs
//! upward in `i` from a start level (value 1) to level N − 2, and f(z) closes
//! it against the η state (k = 0).

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt::num;
use crate::model::{b_delta, bog_root, c_delta, Couplings, ModelParams};

/// Relative pole floor: denominators must exceed this times φ·N.
pub const POLE_FLOOR: f64 = 1e-12;

/// Sector pair index of flow level `i`.
pub fn level_to_pair(n: u64, level: usize) -> usize {
    (n as usize - level) / 2
}

fn pole_floor(c: &Couplings) -> f64 {
    POLE_FLOOR * c.phi * c.n as f64
}

fn check_pole(c: &Couplings, level: usize, denominator: f64, z: f64) -> Result<()> {
    let floor = pole_floor(c);
    if denominator > floor {
        Ok(())
    } else {
        Err(Error::PoleProximity {
            level,
            denominator,
            floor,
            z,
        })
    }
}

/// The scalar W_{i,i−2}(z)·W*_{i−2,i}(z) at even level 2 ≤ i ≤ N − 2.
pub fn w_product(c: impl Into<Couplings>, level: usize, z: f64) -> Result<f64> {
    let c = c.into();
    let n = c.n as usize;
    if level % 2 == 1 || level < 2 || level + 2 > n {
        return Err(Error::InvalidParams(format!(
            "flow level {level} must be even and in 2..={}",
            n.saturating_sub(2)
        )));
    }
    let nf = c.n as f64;
    let i = level as f64;
    let pairs = (nf - i) / 2.0;
    let numerator = (i - 1.0) * i / (nf * nf) * c.phi * c.phi * (pairs + 1.0) * (pairs + 1.0);
    let upper = i * c.phi / nf + c.k2;
    let lower = (i - 2.0) * c.phi / nf + c.k2;
    let den1 = upper * (nf - i) - z;
    let den2 = lower * (nf - i) + 2.0 * lower - z;
    check_pole(&c, level, den1, z)?;
    check_pole(&c, level, den2, z)?;
    Ok(numerator / (den1 * den2))
}

/// Prefactor (1 − 1/N)φ²/(φ(2ε + 2 − 4/N) − z) of Ǧ_{N−2} in f(z).
pub fn f_prefactor(c: impl Into<Couplings>, z: f64) -> Result<f64> {
    let c = c.into();
    let nf = c.n as f64;
    let den = 2.0 * c.k2 + c.phi * (2.0 - 4.0 / nf) - z;
    check_pole(&c, c.n as usize, den, z)?;
    Ok((1.0 - 1.0 / nf) * c.phi * c.phi / den)
}

/// Ǧ values at every even level from a start level at one z.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowTable {
    pub z: f64,
    pub start_level: usize,
    /// Ǧ at levels start_level, start_level + 2, ... (truncated at a failure).
    pub g_values: Vec<f64>,
    /// W-products at the same levels; the start level carries 0.
    pub w_products: Vec<f64>,
    /// f(z), present when the table reaches level N − 2 validly.
    pub f_value: Option<f64>,
    pub valid: bool,
    /// First level where the geometric-series ratio W·Ǧ reached 1.
    pub failed_level: Option<usize>,
}

impl FlowTable {
    pub fn level_of(&self, idx: usize) -> usize {
        self.start_level + 2 * idx
    }

    /// Ǧ at a given even level, if computed.
    pub fn g_at(&self, level: usize) -> Option<f64> {
        if level < self.start_level || (level - self.start_level) % 2 == 1 {
            return None;
        }
        self.g_values.get((level - self.start_level) / 2).copied()
    }

    /// Ǧ at the last computed level.
    pub fn top(&self) -> Option<f64> {
        self.g_values.last().copied()
    }

    /// CSV with columns `i,w_product,g_value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "i,w_product,g_value")?;
        for (idx, (wp, g)) in self.w_products.iter().zip(&self.g_values).enumerate() {
            writeln!(w, "{},{},{}", self.level_of(idx), num(*wp), num(*g))?;
        }
        Ok(())
    }
}

fn check_start(n: u64, start_level: usize) -> Result<()> {
    if start_level % 2 == 1 || start_level + 2 > n as usize {
        return Err(Error::InvalidParams(format!(
            "start level {start_level} must be even and at most {}",
            n - 2
        )));
    }
    Ok(())
}

/// Builds the flow table Ǧ_i = 1/(1 − W_i·Ǧ_{i−2}) upward from `start_level`.
///
/// A ratio W·Ǧ ≥ 1 marks the table invalid instead of raising an error.
pub fn g_check(c: impl Into<Couplings>, z: f64, start_level: usize) -> Result<FlowTable> {
    let c = c.into();
    check_start(c.n, start_level)?;
    let top_level = c.n as usize - 2;
    let cap = (top_level - start_level) / 2 + 1;
    let mut g_values = Vec::with_capacity(cap);
    let mut w_products = Vec::with_capacity(cap);
    g_values.push(1.0);
    w_products.push(0.0);
    let mut g = 1.0;
    let mut failed_level = None;
    for level in (start_level + 2..=top_level).step_by(2) {
        let w = w_product(c, level, z)?;
        let q = w * g;
        if q >= 1.0 {
            failed_level = Some(level);
            break;
        }
        g = 1.0 / (1.0 - q);
        g_values.push(g);
        w_products.push(w);
    }
    let valid = failed_level.is_none();
    let f_value = if valid { Some(-z - f_prefactor(c, z)? * g) } else { None };
    Ok(FlowTable {
        z,
        start_level,
        g_values,
        w_products,
        f_value,
        valid,
        failed_level,
    })
}

/// Ǧ at level N − 2 from `start_level`, without materializing the table.
pub fn g_top(c: impl Into<Couplings>, z: f64, start_level: usize) -> Result<f64> {
    let c = c.into();
    check_start(c.n, start_level)?;
    let mut g = 1.0;
    for level in (start_level + 2..=c.n as usize - 2).step_by(2) {
        let q = w_product(c, level, z)? * g;
        if q >= 1.0 {
            return Err(Error::FlowInvalid { z, level, ratio: q });
        }
        g = 1.0 / (1.0 - q);
    }
    Ok(g)
}

/// f(z) = −z − (1 − 1/N)φ²/(φ(2ε + 2 − 4/N) − z)·Ǧ_{N−2}(z).
pub fn f_of_z(c: impl Into<Couplings>, z: f64) -> Result<f64> {
    let c = c.into();
    let g = g_top(c, z, 0)?;
    Ok(-z - f_prefactor(c, z)? * g)
}

/// Window length ⌊N^p⌋ rounded down to even. Values within 1e−9 relative
/// of an integer snap to it, so exact powers are not lost to rounding.
pub fn power_window(n: u64, p: f64) -> usize {
    let x = (n as f64).powf(p);
    let r = x.round();
    let w = if (x - r).abs() <= 1e-9 * x.max(1.0) {
        r
    } else {
        x.floor()
    };
    let w = (w as u64).min(n);
    (w - w % 2) as usize
}

/// Start level i₀ = N − ⌊N^(1−β)⌋ (even) of the truncated flow.
pub fn truncation_start(n: u64, beta: f64) -> usize {
    n as usize - power_window(n, 1.0 - beta)
}

/// Ǧ_T: the flow restarted at i₀ = N − ⌊N^(1−β)⌋ with value 1, read at level N − 2.
pub fn g_truncated(c: impl Into<Couplings>, z: f64, beta: f64) -> Result<f64> {
    let c = c.into();
    if power_window(c.n, 1.0 - beta) < 4 {
        return Err(Error::InvalidParams(format!(
            "truncation window N^(1-beta) must be at least 4 (n={}, beta={beta})",
            c.n
        )));
    }
    g_top(c, z, truncation_start(c.n, beta))
}

/// The comparison sequence [Y_{2l}]_* at δ = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YStarSequence {
    /// Pairs (2l, [Y_{2l}]_*) in ascending 2l, from 2 up to the window top.
    pub entries: Vec<(usize, f64)>,
    /// False when some entry fell to zero or below (regime violation).
    pub positive: bool,
}

impl YStarSequence {
    /// [Y_2]_*.
    pub fn terminal(&self) -> f64 {
        self.entries[0].1
    }
}

/// Downward recursion Y_{2l−2} = 1 − 1/(4(1 + a′ − 2b/(2l) − (1−c)/(4l²))Y_{2l})
/// from [Y_{N^(1−β)+2}]_* = 1, with b, c evaluated at δ = 1.
pub fn y_star_sequence(params: &ModelParams, beta: f64) -> YStarSequence {
    let eps = params.epsilon();
    let a = eps * eps + 2.0 * eps;
    let b = b_delta(eps, 1.0);
    let c = c_delta(eps, 1.0);
    let top = power_window(params.n(), 1.0 - beta) + 2;
    let mut entries = Vec::with_capacity(top / 2);
    let mut y = 1.0;
    let mut positive = true;
    entries.push((top, y));
    let mut l = (top / 2) as f64;
    while l > 1.0 {
        y = 1.0 - 1.0 / (4.0 * (1.0 + a - 2.0 * b / (2.0 * l) - (1.0 - c) / (4.0 * l * l)) * y);
        if !(y > 0.0) {
            positive = false;
        }
        l -= 1.0;
        entries.push((2 * l as usize, y));
    }
    entries.reverse();
    YStarSequence { entries, positive }
}

/// A W-product compared with its key-estimate bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeyEstimate {
    pub level: usize,
    pub w_product: f64,
    pub bound: f64,
}

/// W-products at z = E^Bog + (δ−1)φ√(ε²+2ε) against
/// 1/(4(1 + a − 2b^(δ)/(N−i+1) − (1−c^(δ))/(N−i+1)²)), a = 2ε + ε².
pub fn key_estimate(params: &ModelParams, delta: f64) -> Result<Vec<KeyEstimate>> {
    let eps = params.epsilon();
    let z = params.bogoliubov_energy() + (delta - 1.0) * params.phi() * bog_root(eps);
    let a = 2.0 * eps + eps * eps;
    let b = b_delta(eps, delta);
    let c = c_delta(eps, delta);
    let n = params.n() as usize;
    (2..=n - 2)
        .step_by(2)
        .map(|level| {
            let m = (n - level + 1) as f64;
            Ok(KeyEstimate {
                level,
                w_product: w_product(params, level, z)?,
                bound: 1.0 / (4.0 * (1.0 + a - 2.0 * b / m - (1.0 - c) / (m * m))),
            })
        })
        .collect()
}
