//! Dirichlet systems, continued fractions, best-approximation profiles and
//! exponent estimates over F_q((T^{-1})).

mod brute;
mod cfrac;
mod dirichlet;
mod exponent;
mod profile;

pub use brute::{brute_force_profile, BRUTE_FORCE_BUDGET};
pub use cfrac::{cf_expand, check_cf_identities, CFExpansion, CfStop};
pub use dirichlet::{dirichlet_lattice, dirichlet_solve, validate_solution, ApproxSolution, DirichletInstance, SolutionCheck};
pub use exponent::{omega_estimate, Exponent, ExponentEstimate};
pub use profile::{best_profile, BestProfile, ProfileEntry, ProfileMode, DEFAULT_GUARD};
