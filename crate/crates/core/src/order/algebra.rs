use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::OrderError;
use crate::lattice::{IntMatrix, Lattice};

/// A commutative unital ring structure on `Z^rank` given by structure
/// constants: `e_i · e_j = Σ_k table[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order {
    rank: usize,
    table: Vec<BigInt>,
    unity: Vec<BigInt>,
}

impl Order {
    /// Builds an order from nested structure constants. Only shapes are
    /// checked here; ring laws are checked by [`Order::check_laws`].
    pub fn new(mult_table: Vec<Vec<Vec<BigInt>>>, unity: Vec<BigInt>) -> Result<Self, OrderError> {
        let n = mult_table.len();
        if n == 0 {
            return Err(OrderError::Shape("order of rank zero".into()));
        }
        if unity.len() != n {
            return Err(OrderError::Shape(format!(
                "unity has length {}, expected {n}",
                unity.len()
            )));
        }
        let mut table = Vec::with_capacity(n * n * n);
        for (i, row) in mult_table.into_iter().enumerate() {
            if row.len() != n {
                return Err(OrderError::Shape(format!("mult_table[{i}] has wrong length")));
            }
            for (j, prod) in row.into_iter().enumerate() {
                if prod.len() != n {
                    return Err(OrderError::Shape(format!(
                        "mult_table[{i}][{j}] has wrong length"
                    )));
                }
                table.extend(prod);
            }
        }
        Ok(Order {
            rank: n,
            table,
            unity,
        })
    }

    /// The integers, as a rank-one order.
    pub fn integers() -> Self {
        Order {
            rank: 1,
            table: vec![BigInt::one()],
            unity: vec![BigInt::one()],
        }
    }

    /// `Z[x]/(f)` in the power basis, for monic `f`.
    pub fn monogenic(f: &[BigInt]) -> Self {
        let n = f.len() - 1;
        let mut table = vec![BigInt::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = super::poly::power_of_x(i + j, f);
                for (k, c) in prod.into_iter().enumerate() {
                    table[(i * n + j) * n + k] = c.to_integer();
                }
            }
        }
        let mut unity = vec![BigInt::zero(); n];
        unity[0] = BigInt::one();
        Order {
            rank: n,
            table,
            unity,
        }
    }

    /// Block product of orders.
    pub fn product(parts: &[Order]) -> Self {
        let n: usize = parts.iter().map(Order::rank).sum();
        let mut table = vec![BigInt::zero(); n * n * n];
        let mut unity = Vec::with_capacity(n);
        let mut off = 0;
        for part in parts {
            let m = part.rank;
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        table[((off + i) * n + off + j) * n + off + k] =
                            part.structure_constant(i, j, k).clone();
                    }
                }
            }
            unity.extend(part.unity.iter().cloned());
            off += m;
        }
        Order { rank: n, table, unity }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn unity(&self) -> &[BigInt] {
        &self.unity
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &BigInt {
        &self.table[(i * self.rank + j) * self.rank + k]
    }

    pub fn mult_table(&self) -> Vec<Vec<Vec<BigInt>>> {
        let n = self.rank;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.structure_constant(i, j, k).clone()).collect())
                    .collect()
            })
            .collect()
    }

    pub fn basis_element(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rank];
        v[i] = BigInt::one();
        v
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.rank]
    }

    pub fn scalar(&self, k: &BigInt) -> Vec<BigInt> {
        self.unity.iter().map(|u| u * k).collect()
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.rank;
        let mut out = vec![BigInt::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai * bj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.structure_constant(i, j, k);
                    if !c.is_zero() {
                        *o += &ab * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `v ↦ v · β` in row convention: row `i` holds `e_i · β`.
    pub fn mult_matrix(&self, beta: &[BigInt]) -> IntMatrix {
        let rows = (0..self.rank)
            .map(|i| self.mul(&self.basis_element(i), beta))
            .collect();
        IntMatrix::from_rows(rows, self.rank)
    }

    pub fn check_laws(&self) -> Result<(), OrderError> {
        let n = self.rank;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.structure_constant(i, j, k) != self.structure_constant(j, i, k) {
                        return Err(OrderError::NotCommutative { i, j });
                    }
                }
            }
        }
        for i in 0..n {
            let ei = self.basis_element(i);
            if self.mul(&self.unity, &ei) != ei {
                return Err(OrderError::BadUnit { i });
            }
        }
        for i in 0..n {
            let ei = self.basis_element(i);
            for j in 0..n {
                let ej = self.basis_element(j);
                let eij = self.mul(&ei, &ej);
                for k in 0..n {
                    let ek = self.basis_element(k);
                    if self.mul(&eij, &ek) != self.mul(&ei, &self.mul(&ej, &ek)) {
                        return Err(OrderError::NotAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// The ideal generated by the given elements.
    pub fn ideal_from_generators(&self, gens: &[Vec<BigInt>]) -> Lattice {
        let mut rows = Vec::with_capacity(gens.len() * self.rank);
        for g in gens {
            for k in 0..self.rank {
                rows.push(self.mul(g, &self.basis_element(k)));
            }
        }
        Lattice::from_vectors(self.rank, &rows)
    }

    pub fn ideal_product(&self, a: &Lattice, b: &Lattice) -> Lattice {
        let mut rows = Vec::with_capacity(a.rank() * b.rank());
        for x in a.basis_vectors() {
            for y in b.basis_vectors() {
                rows.push(self.mul(&x, &y));
            }
        }
        Lattice::from_vectors(self.rank, &rows)
    }

    pub fn ideal_power(&self, a: &Lattice, k: u32) -> Lattice {
        let mut acc = Lattice::full(self.rank);
        for _ in 0..k {
            acc = self.ideal_product(&acc, a);
        }
        acc
    }

    /// Closed under multiplication by every basis element.
    pub fn is_ideal(&self, l: &Lattice) -> bool {
        l.basis_vectors().iter().all(|v| {
            (0..self.rank).all(|k| l.contains(&self.mul(v, &self.basis_element(k))))
        })
    }

    /// `k · O`
    pub fn scalar_ideal(&self, k: &BigInt) -> Lattice {
        Lattice::scaled_full(self.rank, k)
    }
}
