//! Elliptic curves over Q in short Weierstrass form, their reductions at good
//! primes `p > 3`, and membership questions inside `E(F_p)`.

mod curve;
mod fp;
mod group;

pub use curve::{CurveQ, FormalPoint, MWPresentation, RationalPoint};
pub use fp::{factorize, is_prime, primes_in, sqrt_mod, CurveFp, PointFp, DEFAULT_PRIME_LIMIT};
pub use group::{group_structure, group_structure_with, GroupStructureFp, DEFAULT_SAMPLE_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EllipticError {
    #[error("singular curve: discriminant is zero")]
    Singular,
    #[error("bad or unsupported reduction at {0}")]
    BadReduction(u64),
    #[error("prime {p} exceeds the point-counting limit {limit}")]
    PrimeTooLarge { p: u64, limit: u64 },
    #[error("group structure search exhausted at p = {0}")]
    StructureSearchExhausted(u64),
    #[error("point not on curve: {0}")]
    NotOnCurve(String),
    #[error("invalid Mordell-Weil data: {0}")]
    Presentation(String),
}
