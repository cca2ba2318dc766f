//! Ground-state energy and ground-state vector of the three-mode Bogoliubov
//! Hamiltonian in its zero-momentum sector, computed with a scalar
//! (c-number) Feshbach-Schur flow and checked against an exact tridiagonal
//! eigensolver.
//!
//! The sector is spanned by |N − 2k, k, k⟩ for k = 0..=N/2. The flow
//! eliminates pairs one level at a time and closes into a scalar equation
//! f(z) = 0 whose root is the sector ground-state energy.
//!
//! ```
//! use bogoflow::{solve_fixed_point, FlowConfig, ModelParams};
//!
//! let params = ModelParams::new(1024, 0.01, 1.0, 1.0).unwrap();
//! let res = solve_fixed_point(&params, &FlowConfig::default()).unwrap();
//! assert!(res.z_star < 0.0);
//! ```

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod cnumber_flow;
pub mod error;
pub mod fmt;
pub mod groundstate;
pub mod model;
pub mod oracle;
pub mod sequences;
pub mod spectrum;
pub mod stats;

pub use cnumber_flow::{f_of_z, g_check, g_top, g_truncated, w_product, FlowTable};
pub use error::{Error, Result};
pub use groundstate::{expand_ground_state, GroundStateVector};
pub use model::{check_assumptions, AssumptionReport, Couplings, FlowConfig, ModelParams};
pub use oracle::{build_sector_hamiltonian, TridiagonalHamiltonian};
pub use spectrum::{gap_bound_check, solve_fixed_point, GroundEnergyResult};
