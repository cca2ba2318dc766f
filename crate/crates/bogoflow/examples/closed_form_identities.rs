//! The closed-form comparison sequence, the coefficient identity of the key
//! estimate, and the b = c = 0 fixed point.

use bogoflow::sequences::{
    accessori_identity_check, fixed_point_contraction, xtilde_fixed_point, y_closed_form, y_closed_residual,
};

fn main() -> bogoflow::Result<()> {
    for eps in [1e-6, 1e-3, 0.01, 0.1, 0.5] {
        let worst = [2.0, 10.0, 1e3, 1e6]
            .iter()
            .map(|&l| y_closed_residual(l, eps))
            .fold(0.0, f64::max);
        println!(
            "eps={eps:<6} [Y]_B recursion residual {worst:.2e}, limit {:.6}",
            y_closed_form(1e12, eps)
        );
    }

    let ms = (3..=1000).map(f64::from);
    for delta in [0.0, 1.0, 1.3, 1.99] {
        println!(
            "delta={delta}: identity residual {:.2e}",
            accessori_identity_check(0.01, delta, ms.clone())?
        );
    }

    let a = 0.01f64.powi(2) + 0.02;
    let ratios = fixed_point_contraction(a, 50);
    println!(
        "fixed point {:.12}, first contraction ratios {:.4?}",
        xtilde_fixed_point(a),
        &ratios[..5]
    );
    Ok(())
}
