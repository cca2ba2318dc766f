//! Ǧ at every level of the flow, at a point below the ground energy, and
//! the fixed-point function on a z grid around its root.

use bogoflow::oracle::schur_complement_first;
use bogoflow::spectrum::oracle_ground_energy;
use bogoflow::{build_sector_hamiltonian, f_of_z, g_check, ModelParams};

fn main() -> bogoflow::Result<()> {
    let params = ModelParams::new(64, 0.05, 1.0, 1.0)?;
    let lambda0 = oracle_ground_energy(&params)?;
    let table = g_check(params, lambda0 - 0.01, 0)?;
    println!("# flow at z = lambda0 - 0.01, valid = {}", table.valid);
    table.write_csv(std::io::stdout().lock()).ok();

    let tri = build_sector_hamiltonian(params);
    println!("\n# z, f(z), Schur complement");
    for k in 0..8 {
        let z = lambda0 - 0.5 + 0.1 * k as f64;
        let f = f_of_z(params, z).map_or_else(|e| format!("({e})"), |v| format!("{v:.12}"));
        println!("{z:.4}, {f}, {:.12}", schur_complement_first(&tri, z));
    }
    Ok(())
}
