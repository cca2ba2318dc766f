//! The sector matrix three ways: tridiagonal formulas, the dense
//! ladder-operator construction, and its low spectrum.

use bogoflow::oracle::{dense_crosscheck, low_spectrum, lowest_eigenpair, DENSE_LIMIT};
use bogoflow::{build_sector_hamiltonian, Couplings, ModelParams};

fn main() -> bogoflow::Result<()> {
    println!("dense vs tridiagonal (max element deviation):");
    for n in (2..=DENSE_LIMIT).step_by(2) {
        let dev = dense_crosscheck(Couplings::new(n, 0.1, 1.0)?)?;
        println!("  N={n:2}  {dev:.2e}");
    }

    let params = ModelParams::new(1000, 0.01, 1.0, 1.0)?;
    let tri = build_sector_hamiltonian(params);
    let low = low_spectrum(&tri, 4)?;
    let pair = lowest_eigenpair(&tri, f64::EPSILON)?;
    println!("N=1000, eps=0.01: lowest eigenvalues {low:.12?}");
    println!(
        "  eigenvector residual {:.2e}, first components {:.6?}",
        pair.residual,
        &pair.vector[..4]
    );

    // The matrix itself, for external checks.
    let small = build_sector_hamiltonian(ModelParams::new(8, 0.1, 1.0, 1.0)?);
    small.write_csv(std::io::stdout().lock()).ok();
    Ok(())
}
