//! Hermite and Smith normal forms over the integers.
//!
//! Both use plain gcd elimination with smallest-pivot selection. Inputs are
//! desk-sized, so no modular-determinant tricks are attempted.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;

/// Row-style Hermite normal form `H = U·A`.
///
/// `H` is in echelon shape with positive pivots; entries above each pivot are
/// reduced into `[0, pivot)`. Zero rows sit at the bottom.
#[derive(Clone, Debug, Serialize)]
pub struct HermiteDecomposition {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Column index of each pivot, one per nonzero row of `h`.
    #[serde(skip)]
    pub pivots: Vec<usize>,
}

impl HermiteDecomposition {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Smith normal form `D = U·A·V`.
#[derive(Clone, Debug, Serialize)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries `d_1 | d_2 | ...`, `min(rows, cols)` of them.
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().iter().filter(|d| !d.is_zero()).count()
    }
}

fn smallest_nonzero_in_col(m: &IntMatrix, col: usize, from_row: usize) -> Option<usize> {
    (from_row..m.rows())
        .filter(|&r| !m.get(r, col).is_zero())
        .min_by(|&a, &b| m.get(a, col).abs().cmp(&m.get(b, col).abs()))
}

pub fn hnf(a: &IntMatrix) -> HermiteDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut pivots = Vec::new();
    let mut prow = 0;

    for col in 0..n {
        if prow == m {
            break;
        }
        loop {
            let Some(best) = smallest_nonzero_in_col(&h, col, prow) else {
                break;
            };
            h.swap_rows(prow, best);
            u.swap_rows(prow, best);
            let pivot = h.get(prow, col).clone();
            let mut clean = true;
            for r in prow + 1..m {
                if h.get(r, col).is_zero() {
                    continue;
                }
                let q = -h.get(r, col).div_floor(&pivot);
                h.add_row_multiple(r, prow, &q);
                u.add_row_multiple(r, prow, &q);
                if !h.get(r, col).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(prow, col).is_zero() {
            continue;
        }
        if h.get(prow, col).is_negative() {
            h.negate_row(prow);
            u.negate_row(prow);
        }
        let pivot = h.get(prow, col).clone();
        for r in 0..prow {
            let q = -h.get(r, col).div_floor(&pivot);
            h.add_row_multiple(r, prow, &q);
            u.add_row_multiple(r, prow, &q);
        }
        pivots.push(col);
        prow += 1;
    }
    HermiteDecomposition { h, u, pivots }
}

pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let e = d.get(i, j);
                if e.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| e.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            break;
        };
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);

        loop {
            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(&pivot);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(&pivot);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                // A remainder smaller than the pivot survived; promote it.
                let mut pick: Option<(usize, usize)> = None;
                let consider = |i: usize, j: usize, pick: &mut Option<(usize, usize)>| {
                    let e = d.get(i, j);
                    if !e.is_zero()
                        && pick.is_none_or(|(pi, pj)| e.abs() < d.get(pi, pj).abs())
                    {
                        *pick = Some((i, j));
                    }
                };
                for i in t..m {
                    consider(i, t, &mut pick);
                }
                for j in t + 1..n {
                    consider(t, j, &mut pick);
                }
                let (pi, pj) = pick.expect("pivot row/column cannot vanish");
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // Divisibility of the trailing block by the pivot.
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { d, u, v }
}

/// Inverse of a unimodular matrix. Returns `None` if `a` is not unimodular.
pub fn unimodular_inverse(a: &IntMatrix) -> Option<IntMatrix> {
    if !a.is_square() {
        return None;
    }
    let dec = hnf(a);
    (dec.h == IntMatrix::identity(a.rows())).then_some(dec.u)
}
