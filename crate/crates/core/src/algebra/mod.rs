//! Exact arithmetic in F_q, F_q[T], F_q(T) and F_q((T^{-1})).

mod degree;
mod field;
mod laurent;
mod parse;
mod poly;
mod ratfn;
mod vector;

pub use degree::Degree;
pub use field::{Field, Fq};
pub use laurent::{Laurent, Period, DEFAULT_INV_PRECISION};
pub use parse::{format_laurent, parse_laurent, parse_rational};
pub use poly::Poly;
pub use ratfn::RatFn;
pub use vector::{LaurentMat, LaurentVec};

use rand::Rng;

/// Uniform sample from the ball `deg <= top`, digits drawn down to `floor`;
/// the result keeps `floor` as its precision floor (`exact = true` drops it).
pub fn random_laurent<R: Rng + ?Sized>(field: &Field, top: i64, floor: i64, exact: bool, rng: &mut R) -> Laurent {
    let n = (top - floor + 1).max(0) as usize;
    let coeffs: Vec<Fq> = (0..n).map(|_| Fq(rng.gen_range(0..field.q()))).collect();
    Laurent::from_dense(field, top, coeffs, if exact { None } else { Some(floor) })
}
