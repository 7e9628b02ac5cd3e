//! Exact computer-algebra toolkit for polynomial maps with constant Jacobian
//! determinant (Keller maps).
//!
//! The crate covers exact rational arithmetic, sparse multivariate
//! polynomials and polynomial maps, univariate factorization over ℤ,
//! resultant-based elimination of annihilating polynomials, inversion of
//! polynomial automorphisms, analysis of finite-order symmetries, and the
//! integer-grid censuses that measure injectivity on `[-N, N]²`.

pub mod arith;
pub mod census;
pub mod elim;
pub mod error;
pub mod factor;
pub mod dynamics;
pub mod inverse;
mod linalg;
mod modp;
pub mod parse;
pub mod poly;
pub mod uni;

pub use arith::{BigInt, BigRat};
pub use census::{injectivity_census, CensusReport, GrowthSeries};
pub use dynamics::{classify_affine, detect_order, fixed_points, pq_check};
pub use elim::{annihilator, multi_resultant, Annihilator};
pub use error::{Error, Result};
pub use factor::{factor_over_z, is_irreducible_q, Factorization};
pub use inverse::{ansatz_inverse, invert, verify_inverse, InverseResult, InverseStatus};
pub use parse::{parse_expression, parse_map_file};
pub use poly::{Monomial, MultiPoly, PolyMap};
pub use uni::{integer_roots, rational_roots, squarefree_part, uni_gcd, uni_resultant, IntPoly, UniPoly};
