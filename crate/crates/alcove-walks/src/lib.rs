//! Counting random walks confined to alcoves of affine Weyl groups (types
//! A, B, C, D) and on the m-circle, by three mutually verifying routes:
//!
//! * a brute-force dynamic-programming oracle over region points,
//! * exact determinantal/spectral formulas evaluated with certified
//!   precision and rounded to exact integers,
//! * closed-form asymptotics with parity-driven case dispatch.
//!
//! Supporting machinery: an exact symmetric-function engine (Schur,
//! symplectic, odd/even orthogonal characters as Laurent polynomials in
//! q^(1/2)) that verifies the determinant evaluations and character
//! identities the asymptotics rest on, and a saddle-point approximator for
//! coefficients of binomial products, with an exact-coefficient oracle.
//!
//! Coordinates, the region size m, and partition parts may be half-integers;
//! all are stored doubled so every geometric predicate is exact integer
//! arithmetic.

pub mod asym;
pub mod chars;
pub mod cli;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod mp;
pub mod oracle;
pub mod saddle;

pub use error::{Error, Result};
pub use geometry::{Family, Point, RegionSpec, StepSet, WalkProblem};
pub use oracle::{BigCount, EndpointDistribution};
