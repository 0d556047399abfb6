//! Finite-horizon checks of the transference statements: the inequalities
//! between homogeneous and inhomogeneous exponents, and the intersection and
//! contraction properties of the `I_t` / `H_t` set families.

mod bz;
mod contraction;
mod intersection;
mod sets;

pub use bz::{check_bz, check_dyson, BzReport, CheckStatus, DysonReport, DysonSide, InequalityCheck};
pub use contraction::{verify_contraction, AlphaContraction, BallCheck, ContractionReport};
pub use intersection::{verify_intersection, PropertyReport, Violation};
pub use sets::{psi_threshold, AlphaIndex, FlaggedSet, SetFamily, SetFamilyConfig, ALPHA_BUDGET};
