//! Ground-state vector from the flow, against inverse iteration.

use bogoflow::groundstate::tail_series;
use bogoflow::oracle::lowest_eigenpair;
use bogoflow::{build_sector_hamiltonian, expand_ground_state, solve_fixed_point, FlowConfig, ModelParams};

fn main() -> bogoflow::Result<()> {
    let params = ModelParams::new(128, 0.01, 1.0, 1.0)?;
    let cfg = FlowConfig::default();
    let res = solve_fixed_point(&params, &cfg)?;
    let mut psi = expand_ground_state(&params, &cfg, res.z_star, None)?;

    let tri = build_sector_hamiltonian(params);
    let oracle = lowest_eigenpair(&tri, f64::EPSILON)?;
    let overlap = psi.attach_oracle(&oracle.vector);
    println!("overlap 1 - {:.2e}, residual {:.2e}", 1.0 - overlap, psi.residual(&tri));

    let series = tail_series(&params, &cfg, 40);
    println!("tail ratios settle below 1 from j = {:?}", series.threshold);
    psi.write_csv(&oracle.vector, std::io::stdout().lock()).ok();
    Ok(())
}
