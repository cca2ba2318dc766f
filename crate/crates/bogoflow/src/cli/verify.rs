//! Property suites driven by `--mode verify`.
//!
//! Point suites run over the configured (N, ε, φ, Δ0) grid. Sequence and
//! decay suites use their own fixed grids, since their statements only make
//! sense in particular regimes.

use rayon::prelude::*;
use serde::Serialize;

use super::config::{GridPoint, RunConfig};
use crate::cnumber_flow::{f_of_z, g_check, g_top, key_estimate, y_star_sequence};
use crate::error::{Error, Result};
use crate::groundstate::{expand_ground_state, gamma_truncation_experiment, kz_truncation_bounds, tail_series};
use crate::model::{check_assumptions, Couplings, FlowConfig, ModelParams};
use crate::oracle::{
    build_sector_hamiltonian, dense_crosscheck, eigenvalue_by_index, lowest_eigenpair, schur_complement_first,
    TridiagonalHamiltonian,
};
use crate::sequences::{
    accessori_identity_check, bound_slack, fixed_point_contraction, gamma_regime_grid, x_summary, xtilde_fixed_point,
    xtilde_sequence, y_closed_form, y_closed_residual,
};
use crate::spectrum::{gap_bound_check, solve_fixed_point, GroundEnergyResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub group: &'static str,
    pub pass: bool,
    pub checked: usize,
    pub failures: usize,
    /// Worst measured value of the suite's figure of merit.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

struct Suite {
    name: &'static str,
    group: &'static str,
    run: fn(&Context) -> SuiteResult,
}

const SUITES: &[Suite] = &[
    Suite {
        name: "matrix",
        group: "oracle",
        run: suite_matrix,
    },
    Suite {
        name: "oracle",
        group: "oracle",
        run: suite_oracle,
    },
    Suite {
        name: "overlap",
        group: "oracle",
        run: suite_overlap,
    },
    Suite {
        name: "continued-fraction",
        group: "flow",
        run: suite_continued_fraction,
    },
    Suite {
        name: "monotonicity",
        group: "flow",
        run: suite_monotonicity,
    },
    Suite {
        name: "key-estimate",
        group: "flow",
        run: suite_key_estimate,
    },
    Suite {
        name: "y-star",
        group: "flow",
        run: suite_y_star,
    },
    Suite {
        name: "truncation",
        group: "flow",
        run: suite_truncation,
    },
    Suite {
        name: "uniqueness",
        group: "spectrum",
        run: suite_uniqueness,
    },
    Suite {
        name: "bounds",
        group: "spectrum",
        run: suite_bounds,
    },
    Suite {
        name: "x-bound",
        group: "sequences",
        run: suite_x_bound,
    },
    Suite {
        name: "xtilde-bound",
        group: "sequences",
        run: suite_xtilde_bound,
    },
    Suite {
        name: "closed-form",
        group: "sequences",
        run: suite_closed_form,
    },
    Suite {
        name: "accessori",
        group: "sequences",
        run: suite_accessori,
    },
    Suite {
        name: "fixed-point",
        group: "sequences",
        run: suite_fixed_point,
    },
    Suite {
        name: "tail",
        group: "groundstate",
        run: suite_tail,
    },
    Suite {
        name: "kz",
        group: "groundstate",
        run: suite_kz,
    },
];

/// Suite names, for help text and validation.
pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// Resolves `--only` to suite indices; entries match a suite or a group name.
fn selected(only: Option<&[String]>) -> Result<Vec<&'static Suite>> {
    let Some(only) = only else {
        return Ok(SUITES.iter().collect());
    };
    for o in only {
        if !SUITES.iter().any(|s| s.name == o || s.group == o) {
            return Err(Error::config("only", format!("unknown suite or group `{o}`")));
        }
    }
    Ok(SUITES
        .iter()
        .filter(|s| only.iter().any(|o| o == s.name || o == s.group))
        .collect())
}

/// Per-point data shared by the point suites.
struct Solved {
    params: ModelParams,
    tri: TridiagonalHamiltonian,
    lambda0: f64,
    result: GroundEnergyResult,
}

struct Context<'a> {
    flow: FlowConfig,
    perturb: Option<f64>,
    points: Vec<(GridPoint, std::result::Result<Solved, String>)>,
    _cfg: &'a RunConfig,
}

impl Context<'_> {
    fn solved(&self) -> impl Iterator<Item = &Solved> {
        self.points.iter().filter_map(|(_, s)| s.as_ref().ok())
    }

    fn unsolved(&self) -> usize {
        self.points.iter().filter(|(_, s)| s.is_err()).count()
    }
}

fn solve_point(p: &GridPoint, flow: &FlowConfig) -> Result<Solved> {
    let params = p.params()?;
    let tri = build_sector_hamiltonian(params);
    let lambda0 = eigenvalue_by_index(&tri, 0, f64::EPSILON)?;
    let result = solve_fixed_point(&params, flow)?;
    Ok(Solved {
        params,
        tri,
        lambda0,
        result,
    })
}

pub fn run_suites(cfg: &RunConfig) -> Result<Vec<SuiteResult>> {
    let suites = selected(cfg.only.as_deref())?;
    let points = cfg
        .points()
        .into_par_iter()
        .map(|p| {
            let s = solve_point(&p, &cfg.flow).map_err(|e| e.to_string());
            (p, s)
        })
        .collect();
    let ctx = Context {
        flow: cfg.flow,
        perturb: cfg.perturb,
        points,
        _cfg: cfg,
    };
    Ok(suites.par_iter().map(|s| (s.run)(&ctx)).collect::<Vec<_>>())
}

/// Accumulates a "measured ≤ tolerance" figure of merit.
struct Tally {
    checked: usize,
    failures: usize,
    worst: f64,
    worst_at: String,
}

impl Tally {
    fn new() -> Self {
        Self {
            checked: 0,
            failures: 0,
            worst: 0.0,
            worst_at: String::new(),
        }
    }

    /// Records a measurement that must not exceed `tol`. NaN counts as failure.
    fn at_most(&mut self, value: f64, tol: f64, at: impl FnOnce() -> String) {
        self.checked += 1;
        if !(value <= tol) {
            self.failures += 1;
        }
        if !(value <= self.worst) {
            self.worst = value;
            self.worst_at = at();
        }
    }

    fn fail(&mut self, at: String) {
        self.checked += 1;
        self.failures += 1;
        self.worst = f64::INFINITY;
        self.worst_at = at;
    }

    fn finish(self, name: &'static str, group: &'static str, tolerance: f64, note: &str) -> SuiteResult {
        let mut detail = String::new();
        if !self.worst_at.is_empty() {
            detail.push_str(&format!("worst at {}", self.worst_at));
        }
        if !note.is_empty() {
            if !detail.is_empty() {
                detail.push_str("; ");
            }
            detail.push_str(note);
        }
        SuiteResult {
            name,
            group,
            pass: self.failures == 0 && self.checked > 0,
            checked: self.checked,
            failures: self.failures,
            worst: self.worst,
            tolerance,
            detail,
        }
    }
}

fn at_point(p: &ModelParams) -> String {
    format!("n={} eps={} phi={}", p.n(), p.epsilon(), p.phi())
}

fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp())
        .collect()
}

fn note_unsolved(ctx: &Context, t: &mut Tally) {
    for (p, s) in &ctx.points {
        if let Err(e) = s {
            t.fail(format!("n={} eps={}: {e}", p.n, p.epsilon));
        }
    }
}

fn suite_matrix(ctx: &Context) -> SuiteResult {
    const TOL: f64 = 1e-14;
    let mut t = Tally::new();
    let mut eps: Vec<f64> = ctx.points.iter().map(|(p, _)| p.epsilon).collect();
    let mut phi: Vec<f64> = ctx.points.iter().map(|(p, _)| p.phi).collect();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    phi.push(0.0);
    phi.sort_by(f64::total_cmp);
    phi.dedup();
    for n in (2..=12).step_by(2) {
        for &e in &eps {
            for &ph in &phi {
                let c = Couplings::new(n, e * ph, ph).expect("valid couplings");
                // Matrix elements grow like N(ε+1)φ; compare relative to that scale.
                let scale = 1f64.max(n as f64 * (e + 1.0) * ph);
                match dense_crosscheck(c) {
                    Ok(d) => t.at_most(d / scale, TOL, || format!("n={n} eps={e} phi={ph}")),
                    Err(err) => t.fail(err.to_string()),
                }
            }
        }
    }
    t.finish(
        "matrix",
        "oracle",
        TOL,
        "dense ladder-operator matrix vs tridiagonal, N <= 12",
    )
}

fn suite_oracle(ctx: &Context) -> SuiteResult {
    const TOL: f64 = 1e-10;
    let mut t = Tally::new();
    note_unsolved(ctx, &mut t);
    for s in ctx.solved() {
        let d = (s.result.z_star - s.lambda0).abs() / s.params.phi();
        t.at_most(d, TOL, || at_point(&s.params));
    }
    t.finish("oracle", "oracle", TOL, "|z* - lambda0|/phi")
}

fn suite_overlap(ctx: &Context) -> SuiteResult {
    const TOL: f64 = 1e-9;
    const RES_TOL: f64 = 1e-8;
    let mut t = Tally::new();
    let mut res = Tally::new();
    note_unsolved(ctx, &mut t);
    let rows: Vec<_> = ctx
        .solved()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|s| -> Result<(f64, f64)> {
            let v = lowest_eigenpair(&s.tri, f64::EPSILON)?;
            let psi = expand_ground_state(&s.params, &ctx.flow, s.result.z_star, None)?;
            Ok((1.0 - psi.overlap(&v.vector), psi.residual(&s.tri) / s.tri.norm_inf()))
        })
        .collect();
    for (s, row) in ctx.solved().zip(rows) {
        match row {
            Ok((o, r)) => {
                t.at_most(o, TOL, || at_point(&s.params));
                res.at_most(r, RES_TOL, || at_point(&s.params));
            }
            Err(e) => t.fail(format!("{}: {e}", at_point(&s.params))),
        }
    }
    let note = format!(
        "1 - overlap; eigen-residual/||H|| worst {:.3e} (tol {RES_TOL:e}, {} failures)",
        res.worst, res.failures
    );
    let mut out = t.finish("overlap", "oracle", TOL, &note);
    out.pass &= res.failures == 0;
    out.failures += res.failures;
    out
}

/// The 20 sub-spectral points λ0 − φ·10^(−j/2), j = 0..19.
pub fn sub_spectral_points(lambda0: f64, phi: f64) -> Vec<f64> {
    (0..20).map(|j| lambda0 - phi * 10f64.powf(-(j as f64) / 2.0)).collect()
}

/// Relative deviation of f(z) from the tridiagonal Schur complement, measured
/// against the scale |z| + |f(z) + z| of the two terms that make up f.
pub fn continued_fraction_deviation(c: Couplings, tri: &TridiagonalHamiltonian, z: f64) -> Result<f64> {
    let f = f_of_z(c, z)?;
    let s = schur_complement_first(tri, z);
    Ok((f - s).abs() / (z.abs() + (f + z).abs()))
}

fn suite_continued_fraction(ctx: &Context) -> SuiteResult {
    const TOL: f64 = 1e-12;
    let mut t = Tally::new();
    note_unsolved(ctx, &mut t);
    for s in ctx.solved() {
        let mut tri = s.tri.clone();
        if let Some(p) = ctx.perturb {
            tri.offdiag_mut()[0] *= 1.0 + p;
        }
        for z in sub_spectral_points(s.lambda0, s.params.phi()) {
            match continued_fraction_deviation(s.params.couplings(), &tri, z) {
                Ok(d) => t.at_most(d, TOL, || format!("{} z={z}", at_point(&s.params))),
                Err(e) => t.fail(format!("{} z={z}: {e}", at_point(&s.params))),
            }
        }
    }
    let note = match ctx.perturb {
        Some(p) => format!("t_0 perturbed by relative {p}"),
        None => String::new(),
    };
    t.finish("continued-fraction", "flow", TOL, &note)
}

fn suite_monotonicity(ctx: &Context) -> SuiteResult {
    const G_TOL: f64 = 1e-12;
    // f' <= -1, checked as slope + 1 <= slack; the slack absorbs the
    // finite-difference rounding of f at h = 1e-6 φ.
    const SLOPE_SLACK: f64 = 1e-8;
    let mut t = Tally::new();
    let mut slope = Tally::new();
    slope.worst = f64::NEG_INFINITY;
    note_unsolved(ctx, &mut t);
    for s in ctx.solved().filter(|s| s.params.n() <= 4096) {
        let phi = s.params.phi();
        let h = 1e-6 * phi;
        for off in [1.0, 0.5, 0.1, 1e-2, 1e-3] {
            let za = s.lambda0 - off * phi;
            let zb = za + h;
            let (ta, tb) = match (g_check(s.params, za, 0), g_check(s.params, zb, 0)) {
                (Ok(a), Ok(b)) if a.valid && b.valid => (a, b),
                _ => {
                    t.fail(format!("{} z={za}: flow invalid", at_point(&s.params)));
                    continue;
                }
            };
            let drop = ta
                .g_values
                .iter()
                .zip(&tb.g_values)
                .map(|(a, b)| a - b)
                .fold(0.0f64, f64::max);
            t.at_most(drop, G_TOL, || format!("{} z={za}", at_point(&s.params)));
            let fd = (tb.f_value.unwrap() - ta.f_value.unwrap()) / h;
            slope.at_most(fd + 1.0, SLOPE_SLACK, || format!("{} z={za}", at_point(&s.params)));
        }
    }
    let note = format!(
        "max per-level decrease of G over z; worst f' + 1 = {:.3e} ({} failures)",
        slope.worst, slope.failures
    );
    let mut out = t.finish("monotonicity", "flow", G_TOL, &note);
    out.pass &= slope.failures == 0;
    out.failures += slope.failures;
    out
}

fn suite_key_estimate(ctx: &Context) -> SuiteResult {
    let mut t = Tally::new();
    for s in ctx.solved() {
        if !check_assumptions(&s.params, &ctx.flow).core_ok() {
            continue;
        }
        let delta = ctx.flow.delta_at(s.params.epsilon());
        match key_estimate(&s.params, delta) {
            Ok(list) => {
                for k in list {
                    let excess = (k.w_product - k.bound) / k.bound;
                    t.at_most(excess, 1e-14, || format!("{} level={}", at_point(&s.params), k.level));
                }
            }
            Err(e) => t.fail(format!("{}: {e}", at_point(&s.params))),
        }
    }
    t.finish(
        "key-estimate",
        "flow",
        1e-14,
        "relative excess of W-product over its bound, regime points",
    )
}

fn suite_y_star(_ctx: &Context) -> SuiteResult {
    let mut t = Tally::new();
    let (eps, n, beta) = (0.01, 1_000_000u64, 2.0 / 3.0);
    let params = ModelParams::new(n, eps, 1.0, 1.0).expect("valid");
    let tol = 2e-2 / eps.sqrt() * (n as f64).powf(-beta);
    let y = y_star_sequence(&params, beta);
    match g_top(params, params.bogoliubov_energy(), 0) {
        Ok(g) => t.at_most((y.terminal() - 1.0 / g).abs(), tol, || format!("n={n} eps={eps}")),
        Err(e) => t.fail(e.to_string()),
    }
    if !y.positive || y.entries.iter().any(|&(_, v)| !(v > 0.0 && v <= 1.0)) {
        t.fail("entries outside (0,1]".into());
    }
    t.finish(
        "y-star",
        "flow",
        tol,
        "|[Y_2]_* - 1/G(E^Bog)|, eps=0.01, N=1e6, beta=2/3",
    )
}

/// Even N grid 16·1.4^k up to 10⁵.
pub fn decay_n_grid() -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    let mut x = 16.0f64;
    while x <= 1e5 {
        let n = (x.round() as u64) & !1;
        if out.last() != Some(&n) {
            out.push(n);
        }
        x *= 1.4;
    }
    out
}

fn suite_truncation(_ctx: &Context) -> SuiteResult {
    const R2: f64 = 0.95;
    let mut t = Tally::new();
    let grid = decay_n_grid();
    let mut notes = Vec::new();
    for eps in [0.04, 0.01] {
        for beta in [0.3, 0.5, 0.7] {
            let at = || format!("eps={eps} beta={beta}");
            match gamma_truncation_experiment(eps, 1.0, beta, &grid, None) {
                Ok(r) => match r.fit {
                    Some(f) if f.slope < 0.0 => {
                        t.at_most(1.0 - f.r2, 1.0 - R2, at);
                        notes.push(format!("{eps}/{beta}: slope {:.3} r2 {:.4}", f.slope, f.r2));
                    }
                    _ => t.fail(format!("{}: no negative fit", at())),
                },
                Err(e) => t.fail(format!("{}: {e}", at())),
            }
        }
    }
    t.finish(
        "truncation",
        "flow",
        1.0 - R2,
        &format!("1 - R^2 of ln|G - G_T| fit; {}", notes.join(", ")),
    )
}

fn suite_uniqueness(ctx: &Context) -> SuiteResult {
    let mut t = Tally::new();
    note_unsolved(ctx, &mut t);
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    for s in ctx.solved() {
        let w = s.result.window;
        let z_star = s.result.z_star;
        let phi = s.params.phi();
        let near_lo = z_star - (w.z_max - z_star).abs() - 1e-3 * phi;
        for k in 0..100 {
            let u = (k as f64 * golden).fract();
            let z = if k < 50 {
                w.z_min + u * (w.z_max - w.z_min)
            } else {
                near_lo + u * (w.z_max - near_lo)
            };
            if (z - z_star).abs() < 1e-9 * phi {
                continue;
            }
            let ok = match f_of_z(s.params, z) {
                Ok(f) => (f > 0.0) == (z < z_star),
                Err(_) => z > z_star,
            };
            t.at_most(if ok { 0.0 } else { 1.0 }, 0.0, || {
                format!("{} z={z}", at_point(&s.params))
            });
        }
    }
    t.finish(
        "uniqueness",
        "spectrum",
        0.0,
        "sign(f(z)) = sign(z* - z) on 100 window points per grid point",
    )
}

fn suite_bounds(ctx: &Context) -> SuiteResult {
    let mut t = Tally::new();
    note_unsolved(ctx, &mut t);
    let mut regime = 0;
    for s in ctx.solved() {
        let rep = check_assumptions(&s.params, &ctx.flow);
        if rep.all_ok() {
            regime += 1;
            let ub = s.result.upper_bound;
            t.at_most(s.result.z_star - ub, 0.0, || {
                format!("upper bound {}", at_point(&s.params))
            });
        }
        match gap_bound_check(&s.params, &s.result) {
            Ok(g) => {
                t.at_most(g.sector_bound - g.sector_gap, 0.0, || {
                    format!("sector gap {}", at_point(&s.params))
                });
                t.at_most(g.bound - g.effective_gap, 0.0, || {
                    format!("gap {}", at_point(&s.params))
                });
            }
            Err(e) => t.fail(format!("{}: {e}", at_point(&s.params))),
        }
    }
    let note = format!(
        "bound minus value (negative = holds); z* bound at {regime} points passing every assumption, gap bounds at all {} points",
        ctx.points.len() - ctx.unsolved()
    );
    let mut out = t.finish("bounds", "spectrum", 0.0, &note);
    out.worst = out.worst.max(0.0);
    out
}

fn sequence_points(flow: &FlowConfig) -> Vec<std::result::Result<ModelParams, String>> {
    let mut out = Vec::new();
    for eps in [0.04, 0.01] {
        let grid = gamma_regime_grid(eps, flow);
        if grid.is_empty() {
            out.push(Err(format!("no regime N for eps={eps}")));
        }
        out.extend(
            grid.into_iter()
                .map(|n| ModelParams::new(n, eps, 1.0, 1.0).map_err(|e| e.to_string())),
        );
    }
    out
}

fn suite_x_bound(ctx: &Context) -> SuiteResult {
    let mut t = Tally::new();
    let mut notes = Vec::new();
    for p in sequence_points(&ctx.flow) {
        match p {
            Ok(p) => {
                let s = x_summary(&p, &ctx.flow);
                notes.push(format!(
                    "n={} eps={}: min margin {:.3e}",
                    p.n(),
                    p.epsilon(),
                    s.min_margin
                ));
                t.checked += s.checked;
                t.failures += s.violations;
                let excess = -s.min_margin - bound_slack(1.0);
                if t.worst_at.is_empty() || excess > t.worst {
                    t.worst = excess;
                    t.worst_at = at_point(&p);
                }
            }
            Err(e) => t.fail(e),
        }
    }
    t.finish(
        "x-bound",
        "sequences",
        0.0,
        &format!("lower-bound excess; {}", notes.join(", ")),
    )
}

fn suite_xtilde_bound(ctx: &Context) -> SuiteResult {
    let mut t = Tally::new();
    let mut notes = Vec::new();
    for p in sequence_points(&ctx.flow) {
        match p {
            Ok(p) => {
                let s = xtilde_sequence(&p, &ctx.flow).summary();
                notes.push(format!(
                    "n={} eps={}: min margin {:.3e}",
                    p.n(),
                    p.epsilon(),
                    s.min_margin
                ));
                t.checked += s.checked;
                t.failures += s.violations;
                if !s.positive {
                    t.fail(format!("{}: nonpositive entry", at_point(&p)));
                }
                let excess = -s.min_margin - bound_slack(1.0);
                if t.worst_at.is_empty() || excess > t.worst {
                    t.worst = excess;
                    t.worst_at = at_point(&p);
                }
            }
            Err(e) => t.fail(e),
        }
    }
    t.finish(
        "xtilde-bound",
        "sequences",
        0.0,
        &format!("upper-bound excess; {}", notes.join(", ")),
    )
}

fn suite_closed_form(_ctx: &Context) -> SuiteResult {
    const TOL: f64 = 1e-12;
    let mut t = Tally::new();
    for eps in log_grid(1e-6, 0.5, 13) {
        for l in log_grid(2.0, 1e6, 25) {
            let l = l.round();
            t.at_most(y_closed_residual(l, eps), TOL, || format!("eps={eps} l={l}"));
        }
    }
    let mut exact = 0;
    for l in (1..=1000).chain([10_000, 1_000_000]) {
        let lf = l as f64;
        let want = lf / (2.0 * lf + 1.0);
        if (y_closed_form(lf, 0.0) - want).abs() > want * f64::EPSILON {
            exact += 1;
        }
    }
    t.checked += 1;
    t.failures += usize::from(exact > 0);
    t.finish(
        "closed-form",
        "sequences",
        TOL,
        &format!("recursion residual; eps=0 branch off by more than 1 ulp at {exact} l"),
    )
}

fn suite_accessori(_ctx: &Context) -> SuiteResult {
    const TOL: f64 = 1e-13;
    let mut t = Tally::new();
    let ms: Vec<f64> = log_grid(3.0, 1e6, 60).into_iter().map(f64::round).collect();
    for delta in [0.0, 1.0, 1.3, 1.99] {
        for eps in [0.0, 0.01, 0.1] {
            match accessori_identity_check(eps, delta, ms.iter().copied()) {
                Ok(r) => t.at_most(r, TOL, || format!("delta={delta} eps={eps}")),
                Err(e) => t.fail(e.to_string()),
            }
        }
    }
    t.finish(
        "accessori",
        "sequences",
        TOL,
        "relative residual of the coefficient identity",
    )
}

fn suite_fixed_point(_ctx: &Context) -> SuiteResult {
    let mut t = Tally::new();
    let mut cs = Vec::new();
    for eps in [0.1, 0.04, 0.01, 0.001] {
        let a = eps * eps + 2.0 * eps;
        let y = xtilde_fixed_point(a);
        let res = (y - (1.0 - 1.0 / (4.0 * (1.0 + a) * y))).abs() / (y * f64::EPSILON);
        t.at_most(res, 1.0, || format!("eps={eps}"));
        let ratios = fixed_point_contraction(a, 200);
        let worst = ratios.iter().copied().fold(0.0f64, f64::max);
        if ratios.is_empty() || !(worst < 1.0) {
            t.fail(format!("eps={eps}: no contraction"));
        } else {
            cs.push(format!("eps={eps}: c={:.3}", (1.0 / worst - 1.0) / eps.sqrt()));
        }
    }
    t.finish(
        "fixed-point",
        "sequences",
        1.0,
        &format!("residual in ulps; {}", cs.join(", ")),
    )
}

fn suite_tail(ctx: &Context) -> SuiteResult {
    let mut t = Tally::new();
    let mut notes = Vec::new();
    for eps in [0.1, 0.04, 0.01] {
        let at = || format!("eps={eps}");
        let params = ModelParams::new(4096, eps, 1.0, 1.0).expect("valid");
        let res =
            solve_fixed_point(&params, &ctx.flow).and_then(|r| expand_ground_state(&params, &ctx.flow, r.z_star, None));
        let psi = match res {
            Ok(p) => p,
            Err(e) => {
                t.fail(format!("{}: {e}", at()));
                continue;
            }
        };
        let series = tail_series(&params, &ctx.flow, psi.k_max());
        notes.push(format!("eps={eps}: j0={:?}", series.threshold));
        if series.threshold.is_none() {
            t.fail(format!("{}: ratios never settle below 1", at()));
        }
        for j in 2..=psi.k_max() {
            let (a, b) = (psi.coeffs[j], psi.coeffs[j - 1]);
            if b == 0.0 || a == 0.0 {
                break;
            }
            let measured = (a / b).abs();
            let Some(r) = series.ratio(j) else { break };
            t.at_most(measured / r - 1.0, 1e-6, || format!("eps={eps} j={j}"));
        }
    }
    t.finish(
        "tail",
        "groundstate",
        1e-6,
        &format!("|psi_j/psi_(j-1)| over c_j/c_(j-1), minus 1; {}", notes.join(", ")),
    )
}

fn suite_kz(ctx: &Context) -> SuiteResult {
    let mut t = Tally::new();
    for eps in [0.04, 0.01] {
        let params = ModelParams::new(4096, eps, 1.0, 1.0).expect("valid");
        let n = params.n() as usize;
        match kz_truncation_bounds(&params, &ctx.flow, 2, n - 2, 8) {
            Ok(b) => {
                let worst = b.z.iter().copied().fold(0.0f64, f64::max);
                t.at_most(worst, 1.0 - f64::EPSILON, || format!("eps={eps}"));
            }
            Err(e) => t.fail(format!("eps={eps}: {e}")),
        }
    }
    t.finish("kz", "groundstate", 1.0, "max Z_(r,eps) over levels, N=4096")
}
