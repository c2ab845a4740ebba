use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};


pub type RationalVec = Vec<BigRational>;

pub(crate) fn to_rational(v: &[BigInt]) -> RationalVec {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Least common multiple of the denominators.
pub(crate) fn common_denominator(v: &[BigRational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Some rational solution of `x · rows = b`, where `rows` are the rows of a
/// matrix. Returns `None` if the system is inconsistent.
pub fn solve_rational(rows: &[RationalVec], b: &[BigRational]) -> Option<RationalVec> {
    let k = rows.len();
    let n = b.len();
    // Work on the transposed system A^T x = b: n equations, k unknowns.
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut r: Vec<BigRational> = rows.iter().map(|row| row[j].clone()).collect();
            r.push(b[j].clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut prow = 0;
    for col in 0..k {
        let Some(sel) = (prow..n).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(prow, sel);
        let inv = aug[prow][col].recip();
        for e in aug[prow].iter_mut() {
            *e *= &inv;
        }
        for r in 0..n {
            if r != prow && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..=k {
                    let delta = &f * &aug[prow][c];
                    aug[r][c] -= delta;
                }
            }
        }
        pivot_cols.push(col);
        prow += 1;
        if prow == n {
            break;
        }
    }
    if aug[prow..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = aug[r][k].clone();
    }
    Some(x)
}
