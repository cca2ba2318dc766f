//! The X and X̃ sequences against their analytic bounds, at the smallest
//! cube N = m³ that meets the regime conditions.

use bogoflow::sequences::{gamma_regime_side, x_summary, xtilde_sequence};
use bogoflow::{FlowConfig, ModelParams};

fn main() -> bogoflow::Result<()> {
    let cfg = FlowConfig::default();
    for eps in [0.04, 0.01] {
        let Some(m) = gamma_regime_side(eps, &cfg) else {
            println!("eps={eps}: no regime N");
            continue;
        };
        for side in [m, 2 * m] {
            let params = ModelParams::new(side.pow(3), eps, 1.0, 1.0)?;
            let x = x_summary(&params, &cfg);
            let xt = xtilde_sequence(&params, &cfg).summary();
            println!(
                "eps={eps} N={}^3: X lower bound {} violations (min margin {:.3e}); X~ upper bound {} violations (min margin {:.3e})",
                side, x.violations, x.min_margin, xt.violations, xt.min_margin
            );
        }
    }
    Ok(())
}
