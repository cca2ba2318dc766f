//! |z* − E^Bog| as N grows, next to the three terms of the error budget.

use bogoflow::spectrum::{energy_error_diagnostic, BudgetConstants};
use bogoflow::{solve_fixed_point, FlowConfig, ModelParams};

fn main() -> bogoflow::Result<()> {
    let cfg = FlowConfig::default();
    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>12}  dominant",
        "N", "measured", "1/(eps N^b)", "truncation", "1/N"
    );
    for n in [1_000u64, 10_000, 100_000, 1_000_000] {
        let params = ModelParams::new(n, 0.01, 1.0, 1.0)?;
        let res = solve_fixed_point(&params, &cfg)?;
        let b = energy_error_diagnostic(&params, &cfg, &res, BudgetConstants::default());
        println!(
            "{n:>8} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e}  {:?}",
            b.measured, b.term_beta, b.term_truncation, b.term_n, b.dominant
        );
    }
    Ok(())
}
