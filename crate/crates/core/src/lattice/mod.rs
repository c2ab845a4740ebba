//! Exact integer linear algebra: normal forms, integer solving, and
//! sublattice bookkeeping.

mod matrix;
mod normal_form;
pub(crate) mod rational;
mod zlattice;

pub use matrix::IntMatrix;
pub use normal_form::{hnf, snf, unimodular_inverse, HermiteDecomposition, SmithDecomposition};
pub use rational::{solve_rational, RationalVec};
pub use zlattice::{
    adapted_basis, lattice_index, lattice_intersection, left_kernel, membership_localized,
    right_kernel, solve_integer, valuation, AdaptedBasis, Lattice, LatticeIndex,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("basis vector {row} of the sublattice is not contained in the superlattice")]
    NotContained { row: usize },
}
