//! How fast the flow forgets its starting level: |Ǧ − Ǧ_T| against the
//! truncation window, with the fitted decay rate.

use bogoflow::groundstate::{gamma_truncation_experiment, kz_truncation_bounds, predicted_decay_slope};
use bogoflow::{FlowConfig, ModelParams};

fn main() -> bogoflow::Result<()> {
    let grid: Vec<u64> = (0..28).map(|k| ((16.0 * 1.4f64.powi(k)).round() as u64) & !1).collect();
    for eps in [0.04, 0.01] {
        for beta in [0.3, 0.5, 0.7] {
            let r = gamma_truncation_experiment(eps, 1.0, beta, &grid, None)?;
            let fit = r.fit.expect("enough points");
            println!(
                "eps={eps} beta={beta}: slope {:.4} (predicted {:.4}), R^2 {:.4}, c fit {:.2} vs {:.2}",
                fit.slope,
                predicted_decay_slope(eps),
                fit.r2,
                r.c_fit.unwrap_or(f64::NAN),
                r.c_pred
            );
        }
    }

    let params = ModelParams::new(4096, 0.04, 1.0, 1.0)?;
    let b = kz_truncation_bounds(&params, &FlowConfig::default(), 2, 200, 6)?;
    println!(
        "K/Z over levels 2..200: product {:.3e}, remainder {:.3e}",
        b.product, b.remainder
    );
    Ok(())
}
