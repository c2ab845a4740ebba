//! Orders in products of number fields, with their normalization supplied as
//! input.

mod algebra;
pub mod fixtures;
mod full_map;
mod ideal;
mod normalization;
pub mod poly;

use num_bigint::BigInt;

pub use algebra::Order;
pub use full_map::FullMap;
pub use ideal::{
    factor_prime, prime_product_check, IdealLattice, InclusionReport, PartitionPair,
    PrimeIdealData,
};
pub use normalization::{
    check_order, ComponentSpec, ExponentData, NormalizedOrder, Normalization,
    NumberFieldComponent, OrderSpec,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("malformed input: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("product is not associative on basis triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("product is not commutative on basis pair ({i}, {j})")]
    NotCommutative { i: usize, j: usize },
    #[error("unity does not act trivially on basis element {i}")]
    BadUnit { i: usize },
    #[error("embedding is not a ring homomorphism")]
    EmbeddingNotRingMap,
    #[error("embedding is not injective")]
    EmbeddingNotInjective,
    #[error("cokernel is infinite")]
    InfiniteCokernel,
    #[error("defining polynomial is not monic")]
    NotMonic,
    #[error("defining polynomial is reducible over Q")]
    Reducible,
    #[error("components of degree {0} are not supported")]
    UnsupportedDegree(usize),
    #[error("ring basis is singular")]
    RingBasisSingular,
    #[error("ring basis is not closed under multiplication")]
    RingBasisNotClosed,
    #[error("powers of the root are not integral over the ring basis")]
    PowerBasisNotIntegral,
    #[error("p = {p} divides the index {index} of Z[θ] in the component")]
    IndexDivisible { p: u64, index: BigInt },
    #[error("no partition element for prime {index}")]
    NoSolution { index: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
}
