use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::serde_int::IntRepr;

/// Dense integer matrix, row-major, arbitrary precision.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn scalar(n: usize, k: &BigInt) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = k.clone();
        }
        m
    }

    /// Builds a matrix from rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            entries.extend(r);
        }
        IntMatrix {
            rows: nrows,
            cols,
            entries,
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
            cols,
        )
    }

    pub fn from_flat(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn diagonal(values: &[BigInt]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.entries[i * n + i] = v.clone();
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * k).collect(),
        }
    }

    /// Row vector times matrix: `v · A`.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += vi * a;
                }
            }
        }
        out
    }

    /// Matrix times column vector: `A · v`.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        if self.rows == 0 {
            return other.clone();
        }
        if other.rows == 0 {
            return self.clone();
        }
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = idx.into_iter().map(|i| self.row(i).to_vec()).collect();
        IntMatrix::from_rows(rows, self.cols)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let e = &mut self.entries[r * self.cols + j];
            *e = -std::mem::take(e);
        }
    }

    pub fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let e = &mut self.entries[i * self.cols + c];
            *e = -std::mem::take(e);
        }
    }

    /// `row[target] += k * row[source]`
    pub fn add_row_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.entries[source * self.cols + j].clone();
            if !s.is_zero() {
                self.entries[target * self.cols + j] += k * s;
            }
        }
    }

    /// `col[target] += k * col[source]`
    pub fn add_col_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.entries[i * self.cols + source].clone();
            if !s.is_zero() {
                self.entries[i * self.cols + target] += k * s;
            }
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, swap);
                sign = -sign;
            }
            let pivot = m.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&pivot * m.get(i, j) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = pivot;
        }
        sign * m.get(n - 1, n - 1)
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// Greatest common divisor of all entries (zero for the zero matrix).
    pub fn content(&self) -> BigInt {
        self.entries
            .iter()
            .fold(BigInt::zero(), |acc, e| acc.gcd(e))
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<IntRepr>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(IntRepr::from).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<IntRepr>> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::try_from).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(IntMatrix::from_rows(rows, cols))
    }
}
