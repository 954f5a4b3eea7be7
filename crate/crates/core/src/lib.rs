//! Spin-flip bilinear structure on n-qubit pure states.
//!
//! The antilinear spin flip `|ψ̄> = σ_y^{⊗n}|ψ*>` turns the state space into an
//! orthogonal space (even `n`) or a symplectic space (odd `n`) through the
//! bilinear form `(ψ, φ) = <ψ̄|φ>`. This crate provides
//!
//! * [`spinflip`]: matrix-free flip and form kernels plus the operator flip,
//! * [`bases`]: magic and product bi-orthonormal bases and their parametrizations,
//! * [`groups`]: form preservation, local SL(2) representations and the SLOCC obstruction,
//! * [`entanglement`]: the tangle `|<ψ̄|ψ>|` and maximal-entanglement criteria,
//! * [`io`] and [`selftest`]: the file formats and invariant battery used by the CLI.

pub mod bases;
pub mod entanglement;
pub mod error;
pub mod groups;
pub mod io;
pub mod selftest;
pub mod spinflip;
pub mod tensor_core;

pub use error::{Error, Result};
pub use spinflip::{FormKind, FormValue};
pub use tensor_core::{GlobalOperator, LocalOperatorList, PureState, Tolerances, C64};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
