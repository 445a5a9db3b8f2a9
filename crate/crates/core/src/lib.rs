//! Exact rank of multivariate polynomials and the experiments built on it.
//!
//! For `f` in `k` variables and a pivot variable `v`, write `f` as a
//! polynomial in `v` whose coefficients are polynomials in the other `k-1`
//! variables. The rank of `f` in `v` is the generic rank of the Jacobian of
//! that coefficient vector; the rank of `f` is the maximum over all pivots.
//!
//! * [`poly`]: exact sparse polynomial arithmetic, parsing and printing.
//! * [`matrix`]: polynomial matrices, fraction-free elimination.
//! * [`rank`]: coefficient maps, Jacobians, exact and randomized rank.
//! * [`special`]: rank-one special-form detection through derivative identities.
//! * [`reduction`]: rank-preserving restriction to fewer variables.
//! * [`expansion`]: exact image sizes over finite grids.
//! * [`incidence`]: point/curve incidence instances built from a grid.
//! * [`moment`]: simplex volumes on the moment curve.

pub mod error;
pub mod expansion;
pub mod incidence;
pub mod matrix;
pub mod moment;
pub mod poly;
pub mod rank;
pub mod reduction;
pub mod seed;
pub mod special;

pub use error::{Error, Result};
pub use matrix::PolyMatrix;
pub use poly::{rat, Monomial, Polynomial, Rational, RationalFunction, VarSet};
pub use rank::{CoefficientMap, RankMethod, RankReport};

/// Version tag carried by every serialized report.
pub const REPORT_VERSION: &str = "1";
