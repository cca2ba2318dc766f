//! Physical and flow parameters, closed-form energies and coefficient families,
//! and the smallness assumptions that define the proven regime.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameters of the three-mode problem.
///
/// Energies are in the same units as `phi`; the library defaults to `phi = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    n_particles: u64,
    epsilon: f64,
    phi: f64,
    delta0: f64,
    geometry: Option<Geometry>,
}

/// Box metadata carried for reporting only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub box_side: f64,
    pub dimension: u32,
    pub density: f64,
}

impl ModelParams {
    /// Validates and builds a parameter set. `n` must be even and at least 2.
    pub fn new(n: u64, epsilon: f64, phi: f64, delta0: f64) -> Result<Self> {
        if n % 2 == 1 {
            return Err(Error::OddN(n));
        }
        if n < 2 {
            return Err(Error::InvalidParams(format!("n must be at least 2 (got {n})")));
        }
        for (name, v) in [("epsilon", epsilon), ("phi", phi), ("delta0", delta0)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be positive and finite (got {v})"
                )));
            }
        }
        Ok(Self {
            n_particles: n,
            epsilon,
            phi,
            delta0,
            geometry: None,
        })
    }

    /// Shorthand for `phi = 1`, `delta0 = 1`.
    pub fn unit(n: u64, epsilon: f64) -> Result<Self> {
        Self::new(n, epsilon, 1.0, 1.0)
    }

    pub fn with_geometry(mut self, geometry: Geometry) -> Self {
        self.geometry = Some(geometry);
        self
    }

    pub fn n(&self) -> u64 {
        self.n_particles
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    pub fn geometry(&self) -> Option<Geometry> {
        self.geometry
    }

    /// Kinetic energy k² = ε·φ.
    pub fn k_squared(&self) -> f64 {
        self.epsilon * self.phi
    }

    /// E^Bog for these parameters.
    pub fn bogoliubov_energy(&self) -> f64 {
        bogoliubov_energy(self.epsilon, self.phi)
    }

    pub fn couplings(&self) -> Couplings {
        Couplings {
            n: self.n_particles,
            k2: self.k_squared(),
            phi: self.phi,
        }
    }
}

/// The raw couplings (N, k², φ) that fix the sector matrix and the flow.
///
/// Unlike [`ModelParams`] this allows `k2 = 0` and `phi = 0`, which the
/// non-interacting and zero-kinetic limits need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub n: u64,
    pub k2: f64,
    pub phi: f64,
}

impl Couplings {
    pub fn new(n: u64, k2: f64, phi: f64) -> Result<Self> {
        if n % 2 == 1 {
            return Err(Error::OddN(n));
        }
        if n < 2 || !(k2 >= 0.0 && k2.is_finite()) || !(phi >= 0.0 && phi.is_finite()) {
            return Err(Error::InvalidParams(format!("bad couplings n={n} k2={k2} phi={phi}")));
        }
        Ok(Self { n, k2, phi })
    }

    /// Number of sector states, N/2 + 1.
    pub fn sector_size(&self) -> usize {
        (self.n / 2) as usize + 1
    }
}

impl From<&ModelParams> for Couplings {
    fn from(p: &ModelParams) -> Self {
        p.couplings()
    }
}

impl From<ModelParams> for Couplings {
    fn from(p: ModelParams) -> Self {
        p.couplings()
    }
}

impl From<&Couplings> for Couplings {
    fn from(c: &Couplings) -> Self {
        *c
    }
}

/// E^Bog = −φ[ε + 1 − √(ε² + 2ε)], valid for ε ≥ 0.
pub fn bogoliubov_energy(epsilon: f64, phi: f64) -> f64 {
    -phi * (epsilon + 1.0 - (epsilon * epsilon + 2.0 * epsilon).sqrt())
}

/// s = √(ε² + 2ε).
pub fn bog_root(epsilon: f64) -> f64 {
    (epsilon * epsilon + 2.0 * epsilon).sqrt()
}

/// b^(δ) = (1+ε)·δ·√(ε²+2ε) on δ ∈ [0,2), zero otherwise.
pub fn b_delta(epsilon: f64, delta: f64) -> f64 {
    if (0.0..2.0).contains(&delta) {
        (1.0 + epsilon) * delta * bog_root(epsilon)
    } else {
        0.0
    }
}

/// c^(δ) = −(1−δ²)(ε²+2ε) on δ ∈ [0,2), zero otherwise.
pub fn c_delta(epsilon: f64, delta: f64) -> f64 {
    if (0.0..2.0).contains(&delta) {
        -(1.0 - delta * delta) * (epsilon * epsilon + 2.0 * epsilon)
    } else {
        0.0
    }
}

/// Exponents and constants of the flow machinery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub nu: f64,
    pub mu: f64,
    pub gamma: f64,
    pub beta: f64,
    /// Window parameter; `None` means 1 + √ε.
    pub delta: Option<f64>,
    pub theta: f64,
    pub c_gamma: f64,
    pub k_gamma: f64,
    pub tol_root: f64,
    pub tol_residual: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            nu: 1.5,
            mu: 0.5,
            gamma: 1.0 / 3.0,
            beta: 2.0 / 3.0,
            delta: None,
            theta: 0.1,
            c_gamma: 10.0,
            k_gamma: 0.05,
            tol_root: 1e-13,
            tol_residual: 1e-10,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidParams(m));
        if !(self.nu > 11.0 / 8.0) {
            return fail(format!("nu must exceed 11/8 (got {})", self.nu));
        }
        for (name, v) in [("mu", self.mu), ("gamma", self.gamma), ("beta", self.beta)] {
            if !(v > 0.0 && v < 1.0) {
                return fail(format!("{name} must lie in (0,1) (got {v})"));
            }
        }
        if let Some(d) = self.delta {
            if !(d < 2.0) || !d.is_finite() {
                return fail(format!("delta must be below 2 (got {d})"));
            }
        }
        for (name, v) in [
            ("theta", self.theta),
            ("c_gamma", self.c_gamma),
            ("k_gamma", self.k_gamma),
            ("tol_root", self.tol_root),
            ("tol_residual", self.tol_residual),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return fail(format!("{name} must be positive (got {v})"));
            }
        }
        Ok(())
    }

    /// The effective δ at a given ε.
    pub fn delta_at(&self, epsilon: f64) -> f64 {
        self.delta.unwrap_or(1.0 + epsilon.sqrt())
    }
}

/// Coefficient families entering the sequence bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub delta: f64,
    pub a_prime: f64,
    pub a_bound: f64,
    /// Explicit 1/N correction slot for `a_bound`; zero in the bound form.
    pub a_correction: f64,
    pub a_gamma: f64,
    pub b_delta: f64,
    pub c_delta: f64,
    pub eta: f64,
    pub theta_exp: f64,
    pub xi: f64,
}

impl CoefficientSet {
    /// Evaluates every family at (N, ε, δ). Accepts ε = 0 and any δ ≥ 0.
    pub fn compute(n: u64, epsilon: f64, delta: f64, cfg: &FlowConfig) -> Self {
        let a_prime = epsilon * epsilon + 2.0 * epsilon;
        let nf = n as f64;
        let theta_exp = (2.0 * (cfg.nu - 11.0 / 8.0)).min(0.25);
        Self {
            delta,
            a_prime,
            a_bound: 2.0 * epsilon + epsilon * epsilon,
            a_correction: 0.0,
            a_gamma: 2.0 * epsilon + cfg.c_gamma * (epsilon / nf.powf(cfg.gamma) + 1.0 / nf + epsilon * epsilon),
            b_delta: b_delta(epsilon, delta),
            c_delta: c_delta(epsilon, delta),
            eta: 1.0 - epsilon.sqrt(),
            theta_exp,
            xi: epsilon.powf(theta_exp),
        }
    }
}

/// Coefficient set at the configured δ.
pub fn coefficient_set(params: &ModelParams, cfg: &FlowConfig) -> CoefficientSet {
    CoefficientSet::compute(params.n(), params.epsilon(), cfg.delta_at(params.epsilon()), cfg)
}

/// One inequality of the assumption report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub pass: bool,
    pub lhs: f64,
    pub rhs: f64,
}

impl Condition {
    fn le(lhs: f64, rhs: f64) -> Self {
        Self {
            pass: lhs <= rhs,
            lhs,
            rhs,
        }
    }

    fn lt(lhs: f64, rhs: f64) -> Self {
        Self {
            pass: lhs < rhs,
            lhs,
            rhs,
        }
    }
}

/// Pass/fail status of the smallness assumptions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    /// (i) 1/N ≤ ε^ν.
    pub nu: Condition,
    /// (ii) φN^μ/(Δ0 N (N − N^μ)) < 1/2.
    pub mu_gap: Condition,
    /// (ii) 1/N^μ ≤ ε^((1+θ)/2).
    pub mu_eps: Condition,
    /// (iii) ε² + ε/N^γ + 1/N ≤ k_γ ε√ε.
    pub gamma_eps: Condition,
    /// (iii) 1/N^(1−γ) ≤ k_γ ε.
    pub gamma_window: Condition,
    /// The N-dependent part of (iii): ε/N^γ + 1/N ≤ k_γ ε√ε, i.e. the ε² term dropped.
    pub gamma_eps_n_part: Condition,
}

impl AssumptionReport {
    /// Conditions (i) and (ii): the regime of the flow's well-posedness.
    pub fn core_ok(&self) -> bool {
        self.nu.pass && self.mu_gap.pass && self.mu_eps.pass
    }

    /// Condition (iii).
    pub fn gamma_ok(&self) -> bool {
        self.gamma_eps.pass && self.gamma_window.pass
    }

    /// The N-dependent parts of condition (iii).
    pub fn gamma_n_parts_ok(&self) -> bool {
        self.gamma_eps_n_part.pass && self.gamma_window.pass
    }

    /// Every condition, (i) through (iii).
    pub fn all_ok(&self) -> bool {
        self.core_ok() && self.gamma_ok()
    }
}

pub fn check_assumptions(params: &ModelParams, cfg: &FlowConfig) -> AssumptionReport {
    let n = params.n() as f64;
    let e = params.epsilon();
    let n_mu = n.powf(cfg.mu);
    let gap_lhs = if n - n_mu > 0.0 {
        params.phi() * n_mu / (params.delta0() * n * (n - n_mu))
    } else {
        f64::INFINITY
    };
    let kg = cfg.k_gamma * e * e.sqrt();
    AssumptionReport {
        nu: Condition::le(1.0 / n, e.powf(cfg.nu)),
        mu_gap: Condition::lt(gap_lhs, 0.5),
        mu_eps: Condition::le(1.0 / n_mu, e.powf((1.0 + cfg.theta) / 2.0)),
        gamma_eps: Condition::le(e * e + e / n.powf(cfg.gamma) + 1.0 / n, kg),
        gamma_window: Condition::le(1.0 / n.powf(1.0 - cfg.gamma), cfg.k_gamma * e),
        gamma_eps_n_part: Condition::le(e / n.powf(cfg.gamma) + 1.0 / n, kg),
    }
}

/// The z-interval on which the flow is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralWindow {
    pub z_min: f64,
    /// E^Bog + (δ−1)φ√(ε²+2ε).
    pub z_max: f64,
    /// `z_max`, or min(hint + Δ0/2, z_max) when a hint is given.
    pub top: f64,
}

pub fn spectral_window(params: &ModelParams, cfg: &FlowConfig, z_star_hint: Option<f64>) -> SpectralWindow {
    let e_bog = params.bogoliubov_energy();
    let delta = cfg.delta_at(params.epsilon());
    let z_max = e_bog + (delta - 1.0) * params.phi() * bog_root(params.epsilon());
    let top = match z_star_hint {
        Some(z) => (z + params.delta0() / 2.0).min(z_max),
        None => z_max,
    };
    SpectralWindow {
        z_min: e_bog - 10.0 * params.phi(),
        z_max,
        top,
    }
}

/// z* upper bound E^Bog + (2√2+3)/6·√ε·φ·√(ε²+2ε).
pub fn z_star_upper_bound(params: &ModelParams) -> f64 {
    let e = params.epsilon();
    params.bogoliubov_energy() + (2.0 * 2f64.sqrt() + 3.0) / 6.0 * e.sqrt() * params.phi() * bog_root(e)
}

/// Sector gap lower bound (3−2√2)/6·√ε·φ·√(ε²+2ε).
pub fn sector_gap_bound(params: &ModelParams) -> f64 {
    let e = params.epsilon();
    (3.0 - 2.0 * 2f64.sqrt()) / 6.0 * e.sqrt() * params.phi() * bog_root(e)
}
