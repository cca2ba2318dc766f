//! Solve f(z) = 0 for one parameter point and compare with the exact
//! sector eigenvalue.
//!
//! ```text
//! cargo run --release --example solve_ground_energy -- 4096 0.01
//! ```

use bogoflow::{check_assumptions, gap_bound_check, solve_fixed_point, FlowConfig, ModelParams};

fn main() -> bogoflow::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().map_or(4096, |s| s.parse().expect("N must be an integer"));
    let eps: f64 = args
        .next()
        .map_or(0.01, |s| s.parse().expect("epsilon must be a number"));

    let params = ModelParams::new(n, eps, 1.0, 1.0)?;
    let cfg = FlowConfig::default();
    let report = check_assumptions(&params, &cfg);

    let mut res = solve_fixed_point(&params, &cfg)?;
    let delta = res.compare_oracle(&params)?;
    let gap = gap_bound_check(&params, &res)?;

    println!("N = {n}, eps = {eps}");
    println!("  z*            {:.15}", res.z_star);
    println!("  E^Bog         {:.15}", params.bogoliubov_energy());
    println!(
        "  |z* - E^Bog|  {:.3e}",
        (res.z_star - params.bogoliubov_energy()).abs()
    );
    println!("  |z* - lambda0| {:.3e}  ({} bisection steps)", delta, res.iterations);
    println!("  z* upper bound {} ({:.6})", res.upper_bound_check, res.upper_bound);
    println!(
        "  sector gap    {:.6}  (bound {:.3e})",
        gap.sector_gap, gap.sector_bound
    );
    println!("  regime: (i)-(ii) {}, (iii) {}", report.core_ok(), report.gamma_ok());
    Ok(())
}
