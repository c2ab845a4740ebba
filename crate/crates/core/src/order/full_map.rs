use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::normalization::NormalizedOrder;
use crate::lattice::Lattice;

/// A functional `t : O → Z`, `t(x) = Σ coeffs_i x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullMap {
    #[serde(with = "crate::serde_int::bigint_vec")]
    pub coeffs: Vec<BigInt>,
}

impl FullMap {
    pub fn apply(&self, x: &[BigInt]) -> BigInt {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    fn nonzero_on(&self, l: &Lattice) -> bool {
        l.basis_vectors().iter().any(|v| !self.apply(v).is_zero())
    }
}

/// Signed sequence `0, 1, -1, 2, -2, …`.
fn signed_digit(k: u64) -> i64 {
    if k == 0 {
        0
    } else if k % 2 == 1 {
        k.div_ceil(2) as i64
    } else {
        -((k / 2) as i64)
    }
}

impl NormalizedOrder {
    pub fn component_intersections(&self) -> Vec<Lattice> {
        (0..self.components().len())
            .map(|j| self.component_intersection(j))
            .collect()
    }

    pub fn is_full(&self, t: &FullMap) -> bool {
        self.component_intersections().iter().all(|l| t.nonzero_on(l))
    }

    /// First full functional by increasing sup-norm; within one norm the
    /// coefficients run through `0, 1, -1, …` with the first coordinate
    /// varying fastest.
    pub fn full_map_construct(&self) -> FullMap {
        let n = self.rank();
        let parts = self.component_intersections();
        for m in 1u64.. {
            let base = 2 * m + 1;
            let count = base.checked_pow(n as u32).expect("search space overflow");
            for idx in 0..count {
                let mut rest = idx;
                let mut coeffs = Vec::with_capacity(n);
                let mut norm = 0;
                for _ in 0..n {
                    let digit = signed_digit(rest % base);
                    rest /= base;
                    norm = norm.max(digit.unsigned_abs());
                    coeffs.push(BigInt::from(digit));
                }
                if norm != m {
                    continue;
                }
                let t = FullMap { coeffs };
                if parts.iter().all(|l| t.nonzero_on(l)) {
                    return t;
                }
            }
        }
        unreachable!("a full map exists for every order")
    }
}
