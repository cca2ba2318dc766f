//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero when any
//! criterion fails.

mod common;

use std::process::Command;
use std::time::Instant;

use bogoflow::cli::verify::{decay_n_grid, sub_spectral_points};
use bogoflow::groundstate::gamma_truncation_experiment;
use bogoflow::oracle::lowest_eigenpair;
use bogoflow::sequences::{
    accessori_identity_check, gamma_regime_grid, x_summary, xtilde_sequence, y_closed_form, y_closed_residual,
};
use bogoflow::spectrum::oracle_ground_energy;
use bogoflow::stats::linear_fit;
use bogoflow::{
    build_sector_hamiltonian, check_assumptions, expand_ground_state, f_of_z, gap_bound_check, solve_fixed_point,
    FlowConfig, GroundEnergyResult, ModelParams,
};
use common::{schur_lentz, sector_matrix};

const GRID_N: [u64; 6] = [2, 4, 16, 128, 1024, 16384];
const GRID_EPS: [f64; 4] = [0.5, 0.1, 0.01, 0.001];

struct Outcome {
    pass: bool,
    worst: f64,
    tol: f64,
    detail: String,
}

struct Point {
    params: ModelParams,
    result: GroundEnergyResult,
}

fn report(id: u32, name: &str, o: &Outcome) -> bool {
    println!(
        "{} [{id:>2}] {name:<32} worst={:<12.4e} tol={:.1e}  {}",
        if o.pass { "PASS" } else { "FAIL" },
        o.worst,
        o.tol,
        o.detail
    );
    o.pass
}

fn solve_grid(cfg: &FlowConfig) -> (Vec<Point>, f64) {
    let start = Instant::now();
    let mut points = Vec::new();
    for &n in &GRID_N {
        for &eps in &GRID_EPS {
            let params = ModelParams::new(n, eps, 1.0, 1.0).unwrap();
            let result = solve_fixed_point(&params, cfg).unwrap();
            points.push(Point { params, result });
        }
    }
    (points, start.elapsed().as_secs_f64())
}

fn oracle_equivalence(points: &[Point], secs: f64) -> Outcome {
    let worst = points
        .iter()
        .map(|p| (p.result.z_star - oracle_ground_energy(&p.params).unwrap()).abs())
        .fold(0.0, f64::max);
    Outcome {
        pass: worst <= 1e-10 && secs < 5.0,
        worst,
        tol: 1e-10,
        detail: format!("{} points, solve time {secs:.2}s (limit 5s)", points.len()),
    }
}

fn continued_fraction(points: &[Point]) -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for p in points {
        let (d, t) = sector_matrix(p.params.n(), p.params.epsilon(), 1.0);
        let lambda0 = oracle_ground_energy(&p.params).unwrap();
        for z in sub_spectral_points(lambda0, 1.0) {
            let f = f_of_z(p.params, z).unwrap();
            let s = schur_lentz(&d, &t, z);
            worst = worst.max((f - s).abs() / (z.abs() + (f + z).abs()));
            count += 1;
        }
    }
    Outcome {
        pass: worst <= 1e-12,
        worst,
        tol: 1e-12,
        detail: format!("{count} z values, scale |z| + |f + z|"),
    }
}

fn overlap(points: &[Point], cfg: &FlowConfig) -> Outcome {
    let mut worst_overlap = 0.0f64;
    let mut worst_residual = 0.0f64;
    for p in points {
        let tri = build_sector_hamiltonian(p.params);
        let oracle = lowest_eigenpair(&tri, f64::EPSILON).unwrap();
        let mut psi = expand_ground_state(&p.params, cfg, p.result.z_star, None).unwrap();
        worst_overlap = worst_overlap.max(1.0 - psi.attach_oracle(&oracle.vector));
        worst_residual = worst_residual.max(psi.residual(&tri) / tri.norm_inf());
    }
    Outcome {
        pass: worst_overlap <= 1e-9 && worst_residual <= 1e-8,
        worst: worst_overlap,
        tol: 1e-9,
        detail: format!("1 - overlap; residual/||H|| worst {worst_residual:.2e} (tol 1e-8)"),
    }
}

fn upper_bound(points: &[Point], cfg: &FlowConfig) -> Outcome {
    // The full condition set never holds on this grid because of the ε²
    // part of the γ condition, so the bound is checked on every point that
    // passes conditions (i)-(ii) instead.
    let full = points
        .iter()
        .filter(|p| check_assumptions(&p.params, cfg).all_ok())
        .count();
    let core: Vec<&Point> = points
        .iter()
        .filter(|p| check_assumptions(&p.params, cfg).core_ok())
        .collect();
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for p in &core {
        let excess = p.result.z_star - p.result.upper_bound;
        worst = worst.max(excess);
        if !p.result.upper_bound_check {
            violations += 1;
        }
    }
    Outcome {
        pass: violations == 0 && !core.is_empty(),
        worst,
        tol: 0.0,
        detail: format!(
            "z* - bound over {} points with (i)-(ii); {full} points satisfy all conditions; {violations} violations",
            core.len()
        ),
    }
}

fn convergence(cfg: &FlowConfig) -> Outcome {
    let start = Instant::now();
    let ns = [1e3f64, 1e4, 1e5, 1e6];
    let errs: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let p = ModelParams::new(n as u64, 0.01, 1.0, 1.0).unwrap();
            (solve_fixed_point(&p, cfg).unwrap().z_star - p.bogoliubov_energy()).abs()
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    let xs: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let slope = linear_fit(&xs, &ys).map(|f| f.slope).unwrap_or(f64::NAN);
    Outcome {
        pass: decreasing && (-1.5..=-0.4).contains(&slope) && secs < 30.0,
        worst: slope,
        tol: 0.0,
        detail: format!(
            "log-log slope in [-1.5, -0.4]; errors {}; strictly decreasing {decreasing}; {secs:.2}s",
            errs.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>().join(" ")
        ),
    }
}

fn sequence_bounds(cfg: &FlowConfig) -> Outcome {
    let mut failures = Vec::new();
    let mut worst = f64::INFINITY;
    let mut checked = 0;
    for eps in [0.04, 0.01] {
        for n in gamma_regime_grid(eps, cfg) {
            let p = ModelParams::new(n, eps, 1.0, 1.0).unwrap();
            let x = x_summary(&p, cfg);
            let xt = xtilde_sequence(&p, cfg).summary();
            checked += x.checked + xt.checked;
            worst = worst.min(x.min_margin).min(xt.min_margin);
            let side = (n as f64).cbrt().round();
            if x.violations > 0 {
                failures.push(format!("X eps={eps} N={side}^3 margin {:.2e}", x.min_margin));
            }
            if xt.violations > 0 {
                failures.push(format!("X~ eps={eps} N={side}^3 margin {:.2e}", xt.min_margin));
            }
        }
    }
    Outcome {
        pass: failures.is_empty() && checked > 0,
        worst,
        tol: 0.0,
        detail: if failures.is_empty() {
            format!("min margin over {checked} bounded entries")
        } else {
            format!("violated: {}", failures.join("; "))
        },
    }
}

fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (count - 1) as f64).exp())
        .collect()
}

fn closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for eps in log_grid(1e-6, 0.5, 13) {
        for l in log_grid(2.0, 1e6, 25) {
            worst = worst.max(y_closed_residual(l.round(), eps));
        }
    }
    let mut ulp_ok = true;
    for l in log_grid(1.0, 1e6, 60) {
        let l = l.round();
        let got = y_closed_form(l, 0.0);
        let want = l / (2.0 * l + 1.0);
        ulp_ok &= (got - want).abs() <= f64::EPSILON * want;
    }
    Outcome {
        pass: worst <= 1e-12 && ulp_ok,
        worst,
        tol: 1e-12,
        detail: format!("13 eps x 25 l; eps=0 matches l/(2l+1) to 1 ulp: {ulp_ok}"),
    }
}

fn accessori() -> Outcome {
    let ms = log_grid(3.0, 1e6, 200);
    let mut worst = 0.0f64;
    for delta in [0.0, 1.0, 1.3, 1.99] {
        for eps in [0.0, 0.01, 0.1] {
            worst = worst.max(accessori_identity_check(eps, delta, ms.iter().copied()).unwrap());
        }
    }
    Outcome {
        pass: worst <= 1e-13,
        worst,
        tol: 1e-13,
        detail: "4 delta x 3 eps x 200 m".into(),
    }
}

fn sector_gap(points: &[Point]) -> Outcome {
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for p in points {
        let g = gap_bound_check(&p.params, &p.result).unwrap();
        worst = worst.min(g.sector_gap - g.sector_bound);
        if !g.sector_holds {
            violations += 1;
        }
    }
    Outcome {
        pass: violations == 0,
        worst,
        tol: 0.0,
        detail: format!(
            "min(gap - bound) over all {} points; {violations} violations",
            points.len()
        ),
    }
}

fn truncation_decay() -> Outcome {
    let grid = decay_n_grid();
    let mut worst = 1.0f64;
    let mut notes = Vec::new();
    let mut pass = true;
    for eps in [0.04, 0.01] {
        for beta in [0.3, 0.5, 0.7] {
            match gamma_truncation_experiment(eps, 1.0, beta, &grid, None)
                .ok()
                .and_then(|r| r.fit)
            {
                Some(f) => {
                    pass &= f.slope < 0.0 && f.r2 >= 0.95;
                    worst = worst.min(f.r2);
                    notes.push(format!("{eps}/{beta}:{:.3}", f.slope));
                }
                None => {
                    pass = false;
                    notes.push(format!("{eps}/{beta}: no fit"));
                }
            }
        }
    }
    Outcome {
        pass,
        worst,
        tol: 0.95,
        detail: format!("min R^2; slopes eps/beta {}", notes.join(" ")),
    }
}

fn determinism() -> Outcome {
    let run = |workers: &str| -> Vec<u8> {
        let dir = tempfile::tempdir().unwrap();
        let status = Command::new(env!("CARGO_BIN_EXE_bogoflow"))
            .args([
                "sweep",
                "--n",
                "16:65536:4",
                "--epsilon",
                "0.5,0.1,0.01,0.001",
                "--workers",
                workers,
            ])
            .arg("--out")
            .arg(dir.path())
            .env_remove("BOGOFLOW_OUT")
            .output()
            .unwrap();
        assert!(status.status.success());
        std::fs::read(dir.path().join("results.csv")).unwrap()
    };
    let runs = [run("1"), run("8"), run("8"), run("1")];
    let same = runs.windows(2).all(|w| w[0] == w[1]);
    Outcome {
        pass: same,
        worst: if same { 0.0 } else { 1.0 },
        tol: 0.0,
        detail: format!("4 runs (workers 1, 8, 8, 1), {} bytes each", runs[0].len()),
    }
}

fn main() {
    let cfg = FlowConfig::default();
    let (points, secs) = solve_grid(&cfg);
    let results = [
        report(1, "fixed-point/oracle equivalence", &oracle_equivalence(&points, secs)),
        report(2, "continued-fraction identity", &continued_fraction(&points)),
        report(3, "ground-state overlap", &overlap(&points, &cfg)),
        report(4, "z* upper bound", &upper_bound(&points, &cfg)),
        report(5, "convergence to E^Bog", &convergence(&cfg)),
        report(6, "sequence bounds", &sequence_bounds(&cfg)),
        report(7, "closed-form solution", &closed_form()),
        report(8, "accessori identity", &accessori()),
        report(9, "sector gap", &sector_gap(&points)),
        report(10, "truncation decay", &truncation_decay()),
        report(11, "determinism", &determinism()),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
