//! Auxiliary real sequences with their analytic bound companions, the
//! closed-form [Y]_B solution, and the coefficient identity of the key estimate.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::cnumber_flow::power_window;
use crate::error::{Error, Result};
use crate::fmt::{num, opt};
use crate::model::{b_delta, c_delta, CoefficientSet, FlowConfig, ModelParams};

/// Absolute slack 1e−14·(1 + |value|) used by every bound comparison.
pub fn bound_slack(value: f64) -> f64 {
    1e-14 * (1.0 + value.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    Lower,
    Upper,
}

/// One sequence entry. `bound` is absent outside the stated index range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub index: usize,
    pub value: f64,
    pub bound: Option<f64>,
}

impl Entry {
    /// Signed distance to the bound; positive means the bound holds.
    pub fn margin(&self, kind: BoundKind) -> Option<f64> {
        self.bound.map(|b| match kind {
            BoundKind::Lower => self.value - b,
            BoundKind::Upper => b - self.value,
        })
    }
}

/// Running summary of a bound comparison, usable without storing the sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub kind: BoundKind,
    pub len: usize,
    pub checked: usize,
    pub violations: usize,
    pub min_margin: f64,
    pub min_margin_index: Option<usize>,
    pub min_value: f64,
    pub terminal: f64,
    pub positive: bool,
}

impl BoundSummary {
    fn new(kind: BoundKind) -> Self {
        Self {
            kind,
            len: 0,
            checked: 0,
            violations: 0,
            min_margin: f64::INFINITY,
            min_margin_index: None,
            min_value: f64::INFINITY,
            terminal: f64::NAN,
            positive: true,
        }
    }

    fn push(&mut self, e: &Entry) {
        self.len += 1;
        self.terminal = e.value;
        self.min_value = self.min_value.min(e.value);
        if !(e.value > 0.0) {
            self.positive = false;
        }
        if let Some(m) = e.margin(self.kind) {
            self.checked += 1;
            if m < -bound_slack(e.value) {
                self.violations += 1;
            }
            if m < self.min_margin {
                self.min_margin = m;
                self.min_margin_index = Some(e.index);
            }
        }
    }

    /// Folds an entry stream into a summary.
    pub fn scan(kind: BoundKind, entries: impl IntoIterator<Item = Entry>) -> Self {
        let mut s = Self::new(kind);
        for e in entries {
            s.push(&e);
        }
        s
    }
}

/// A materialized sequence with its bound companion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedSequence {
    pub kind: BoundKind,
    pub entries: Vec<Entry>,
}

impl BoundedSequence {
    pub fn summary(&self) -> BoundSummary {
        BoundSummary::scan(self.kind, self.entries.iter().copied())
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    /// CSV with columns `index,value,bound,margin`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,value,bound,margin")?;
        for e in &self.entries {
            writeln!(
                w,
                "{},{},{},{}",
                e.index,
                num(e.value),
                opt(e.bound),
                opt(e.margin(self.kind))
            )?;
        }
        Ok(())
    }
}

/// All bound sequences of one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSequences {
    pub x: BoundedSequence,
    pub xtilde: BoundedSequence,
    /// [Y_{2l}]_B for l = 1..=N/2.
    pub y_closed: Vec<f64>,
}

pub fn bound_sequences(params: &ModelParams, cfg: &FlowConfig) -> BoundSequences {
    let eps = params.epsilon();
    BoundSequences {
        x: x_sequence(params, cfg),
        xtilde: xtilde_sequence(params, cfg),
        y_closed: (1..=params.n() / 2).map(|l| y_closed_form(l as f64, eps)).collect(),
    }
}

/// The recursion X_{2j+2} = 1 − 1/(4(1 + a − 2b/m − (1−c)/m²)X_{2j}),
/// m = N − 2j − 1, from X_0 = `x0` up to X_{N−2}.
pub fn x_recursion(n: u64, a: f64, b: f64, c: f64, x0: f64) -> Vec<f64> {
    let steps = (n as usize - 2) / 2;
    let mut out = Vec::with_capacity(steps + 1);
    let mut x = x0;
    out.push(x);
    for j in 0..steps {
        let m = (n as usize - 2 * j - 1) as f64;
        x = 1.0 - 1.0 / (4.0 * (1.0 + a - 2.0 * b / m - (1.0 - c) / (m * m)) * x);
        out.push(x);
    }
    out
}

/// Coefficients of the X recursion: a_bound, and b, c at δ = 1 + √ε.
fn x_coefficients(params: &ModelParams, cfg: &FlowConfig) -> CoefficientSet {
    let eps = params.epsilon();
    CoefficientSet::compute(params.n(), eps, 1.0 + eps.sqrt(), cfg)
}

/// Lazily generated X_{2j} entries with the lower bound
/// ½[1 + √(ηa) − (b/√(ηa))/(N − 2j − ξ)].
pub fn x_entries(params: &ModelParams, cfg: &FlowConfig) -> impl Iterator<Item = Entry> {
    let co = x_coefficients(params, cfg);
    let n = params.n() as usize;
    let (a, b, c) = (co.a_bound, co.b_delta, co.c_delta);
    let root = (co.eta * a).sqrt();
    let lower = move |two_j: usize| 0.5 * (1.0 + root - (b / root) / ((n - two_j) as f64 - co.xi));
    let mut x = 1.0;
    (0..=(n - 2) / 2).map(move |j| {
        if j > 0 {
            let m = (n - 2 * (j - 1) - 1) as f64;
            x = 1.0 - 1.0 / (4.0 * (1.0 + a - 2.0 * b / m - (1.0 - c) / (m * m)) * x);
        }
        Entry {
            index: 2 * j,
            value: x,
            bound: Some(lower(2 * j)),
        }
    })
}

pub fn x_sequence(params: &ModelParams, cfg: &FlowConfig) -> BoundedSequence {
    BoundedSequence {
        kind: BoundKind::Lower,
        entries: x_entries(params, cfg).collect(),
    }
}

/// Streaming form of [`x_sequence`] for large N.
pub fn x_summary(params: &ModelParams, cfg: &FlowConfig) -> BoundSummary {
    BoundSummary::scan(BoundKind::Lower, x_entries(params, cfg))
}

/// Start index i₀ = N − ⌊N^(1−γ)⌋ of X̃ (even).
pub fn xtilde_start(n: u64, gamma: f64) -> usize {
    n as usize - power_window(n, 1.0 - gamma).max(2)
}

/// X̃^(γ,δ)_{2j} from X̃_{i₀} = 1 up to 2j = N − 2, with the upper bound
/// ½[1 + √a^(γ) − 1/(N − 2j + 1 − b^(δ))] for 2 ≤ N − 2j ≤ N^(1−γ)/2.
pub fn xtilde_sequence(params: &ModelParams, cfg: &FlowConfig) -> BoundedSequence {
    let co = CoefficientSet::compute(params.n(), params.epsilon(), cfg.delta_at(params.epsilon()), cfg);
    let n = params.n() as usize;
    let i0 = xtilde_start(params.n(), cfg.gamma);
    let window = n - i0;
    let (a, b, c) = (co.a_gamma, co.b_delta, co.c_delta);
    let mut entries = Vec::with_capacity(window / 2);
    let mut x = 1.0;
    let mut two_j = i0;
    loop {
        let rest = n - two_j;
        let bound = (2..=window / 2)
            .contains(&rest)
            .then(|| 0.5 * (1.0 + a.sqrt() - 1.0 / (rest as f64 + 1.0 - b)));
        entries.push(Entry {
            index: two_j,
            value: x,
            bound,
        });
        if two_j + 2 > n - 2 {
            break;
        }
        let m = rest as f64;
        x = 1.0 - 1.0 / (4.0 * (1.0 + a - 2.0 * b / m - (1.0 - c) / (m * m)) * x);
        two_j += 2;
    }
    BoundedSequence {
        kind: BoundKind::Upper,
        entries,
    }
}

/// Fixed point ½(1 + √(a/(1+a))) of y = 1 − 1/(4(1+a)y).
pub fn xtilde_fixed_point(a: f64) -> f64 {
    0.5 * (1.0 + (a / (1.0 + a)).sqrt())
}

/// [Y_{2l}]_B = ½(1 + √a′/√(1+a′) − 1/((2l+1)(1+a′) − √a′√(1+a′))), a′ = ε² + 2ε.
pub fn y_closed_form(l: f64, epsilon: f64) -> f64 {
    let a = epsilon * epsilon + 2.0 * epsilon;
    let sa = a.sqrt();
    let s1 = (1.0 + a).sqrt();
    0.5 * (1.0 + sa / s1 - 1.0 / ((2.0 * l + 1.0) * (1.0 + a) - sa * s1))
}

/// Relative residual of Y_{2l−2} = 1 − 1/(4(1 + a′ − 2b/(2l) − (1−c)/(4l²))Y_{2l})
/// with both sides from [`y_closed_form`] and b, c at δ = 1.
pub fn y_closed_residual(l: f64, epsilon: f64) -> f64 {
    let a = epsilon * epsilon + 2.0 * epsilon;
    let b = b_delta(epsilon, 1.0);
    let c = c_delta(epsilon, 1.0);
    let lhs = y_closed_form(l - 1.0, epsilon);
    let rhs =
        1.0 - 1.0 / (4.0 * (1.0 + a - 2.0 * b / (2.0 * l) - (1.0 - c) / (4.0 * l * l)) * y_closed_form(l, epsilon));
    (lhs - rhs).abs() / lhs.abs()
}

/// Max relative residual of (1+ε − A/m)(1+ε + B/m) = 1 + a − 2b^(δ)/m − (1−c^(δ))/m²
/// over `ms`, with A = ε+1+δs, B = ε+1−δs, s = √(ε²+2ε), a = 2ε+ε².
pub fn accessori_identity_check(epsilon: f64, delta: f64, ms: impl IntoIterator<Item = f64>) -> Result<f64> {
    if !(0.0..2.0).contains(&delta) {
        return Err(Error::InvalidParams(format!("delta must lie in [0,2) (got {delta})")));
    }
    let s = (epsilon * epsilon + 2.0 * epsilon).sqrt();
    let a = 2.0 * epsilon + epsilon * epsilon;
    let b = b_delta(epsilon, delta);
    let c = c_delta(epsilon, delta);
    let big_a = epsilon + 1.0 + delta * s;
    let big_b = epsilon + 1.0 - delta * s;
    let mut worst = 0.0f64;
    for m in ms {
        if !(m >= 3.0) {
            return Err(Error::InvalidParams(format!("m must be at least 3 (got {m})")));
        }
        let lhs = (1.0 + epsilon - big_a / m) * (1.0 + epsilon + big_b / m);
        let rhs = 1.0 + a - 2.0 * b / m - (1.0 - c) / (m * m);
        worst = worst.max((lhs - rhs).abs() / rhs.abs());
    }
    Ok(worst)
}

/// Ratios |Y̌ − Y̌_{2l−2}|/|Y̌ − Y̌_{2l}| of y ↦ 1 − 1/(4(1+a)y) started at 1.
pub fn fixed_point_contraction(a: f64, steps: usize) -> Vec<f64> {
    let fp = xtilde_fixed_point(a);
    let mut y = 1.0;
    let mut ratios = Vec::with_capacity(steps);
    for _ in 0..steps {
        let next = 1.0 - 1.0 / (4.0 * (1.0 + a) * y);
        let (d0, d1) = ((fp - y).abs(), (fp - next).abs());
        if d0 == 0.0 || d1 <= 4.0 * f64::EPSILON * fp {
            break;
        }
        ratios.push(d1 / d0);
        y = next;
    }
    ratios
}

/// Smallest even m such that N = m³ passes conditions (i)-(ii) and the
/// N-dependent parts of (iii). With γ = 1/3 the X̃ window N^(1−γ) is then
/// exactly m².
pub fn gamma_regime_side(epsilon: f64, cfg: &FlowConfig) -> Option<u64> {
    (2..=4000u64).step_by(2).find(|&m| {
        ModelParams::new(m * m * m, epsilon, 1.0, 1.0).is_ok_and(|p| {
            let rep = crate::model::check_assumptions(&p, cfg);
            rep.core_ok() && rep.gamma_n_parts_ok()
        })
    })
}

/// Cube sides m, m+2, ≈1.25m and 2m from the regime threshold m of
/// [`gamma_regime_side`].
pub fn gamma_regime_grid(epsilon: f64, cfg: &FlowConfig) -> Vec<u64> {
    let Some(m) = gamma_regime_side(epsilon, cfg) else {
        return Vec::new();
    };
    let mid = ((m as f64 * 1.25).round() as u64) & !1;
    let mut sides = vec![m, m + 2, mid, 2 * m];
    sides.dedup();
    sides.into_iter().map(|s| s * s * s).collect()
}
