//! Exact scalar and polynomial arithmetic.

pub mod factor;
pub mod field;
pub mod linalg;
pub mod mpoly;
pub mod norm;
pub mod parse;
pub mod upoly;
mod zassenhaus;

pub use factor::{adjoin_root, factor_over, root_orbits, univ_factor, AlgError, RationalFactorization, DEFAULT_MAX_TOWER_DEGREE};
pub use field::{Fe, Level, Rational};
pub use linalg::{nullspace, rank, rref, solve_unique, Matrix};
pub use mpoly::{Exps, MultiPoly, MAXV};
pub use norm::norm_to_rationals;
pub use parse::{parse_poly, parse_poly_in, ParseError};
pub use upoly::UPoly;
