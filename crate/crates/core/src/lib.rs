//! Exact Diophantine approximation over the local field F_q((T^{-1})).
//!
//! * [`algebra`]: finite fields, polynomials, rational functions and
//!   precision-tracked Laurent series.
//! * [`polylattice`]: shifted weak Popov reduction of polynomial matrices,
//!   successive minima, shortest and closest vectors.
//! * [`diophantine`]: Dirichlet systems, continued fractions, best-approximation
//!   profiles and exponent estimates.
//! * [`goodmaps`]: exact Haar measures of cylinder sets and (C, α)-good checks.
//! * [`transference`]: finite-horizon checks of the transference inequalities and
//!   of the intersection and contraction properties.

pub mod algebra;
pub mod error;
pub mod polylattice;
pub mod diophantine;
pub mod goodmaps;
pub mod qpow;
pub mod transference;

pub use error::{Error, Result};
