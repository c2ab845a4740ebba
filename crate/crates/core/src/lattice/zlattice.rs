use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::normal_form::{hnf, snf, unimodular_inverse};
use super::LatticeError;
use crate::serde_int::bigint_vecs;

/// A Z-lattice given by linearly independent basis rows in `Z^ambient_rank`.
///
/// The basis is always kept in row Hermite normal form, so two lattices are
/// equal exactly when their bases are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient_rank: usize,
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(ambient_rank: usize, gens: &IntMatrix) -> Self {
        if gens.rows() == 0 {
            return Self::zero(ambient_rank);
        }
        assert_eq!(gens.cols(), ambient_rank, "generator length mismatch");
        let dec = hnf(gens);
        let rank = dec.rank();
        Lattice {
            ambient_rank,
            basis: dec.h.select_rows(0..rank),
            pivots: dec.pivots,
        }
    }

    pub fn from_vectors<'a, I>(ambient_rank: usize, gens: I) -> Self
    where
        I: IntoIterator<Item = &'a Vec<BigInt>>,
    {
        let rows: Vec<Vec<BigInt>> = gens.into_iter().cloned().collect();
        Self::from_generators(ambient_rank, &IntMatrix::from_rows(rows, ambient_rank))
    }

    pub fn zero(ambient_rank: usize) -> Self {
        Lattice {
            ambient_rank,
            basis: IntMatrix::zeros(0, ambient_rank),
            pivots: Vec::new(),
        }
    }

    /// `k · Z^n`
    pub fn scaled_full(ambient_rank: usize, k: &BigInt) -> Self {
        Self::from_generators(ambient_rank, &IntMatrix::scalar(ambient_rank, k))
    }

    pub fn full(ambient_rank: usize) -> Self {
        Self::scaled_full(ambient_rank, &BigInt::one())
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_rank
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        self.basis.row_vecs()
    }

    /// Coefficients `c` with `c · basis = v`, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_rank);
        let mut rest = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rank());
        for (r, &c) in self.pivots.iter().enumerate() {
            if rest[..c].iter().any(|e| !e.is_zero()) {
                return None;
            }
            let (q, rem) = rest[c].div_rem(self.basis.get(r, c));
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (j, e) in rest.iter_mut().enumerate().skip(c) {
                    let b = self.basis.get(r, j);
                    if !b.is_zero() {
                        *e -= &q * b;
                    }
                }
            }
            coeffs.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coeffs)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        assert_eq!(self.ambient_rank, other.ambient_rank);
        (0..self.rank()).all(|i| other.contains(self.basis.row(i)))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.ambient_rank, other.ambient_rank);
        Lattice::from_generators(self.ambient_rank, &self.basis.vstack(&other.basis))
    }

    pub fn scale(&self, k: &BigInt) -> Lattice {
        Lattice::from_generators(self.ambient_rank, &self.basis.scale(k))
    }

    pub fn intersection(&self, other: &Lattice) -> Lattice {
        lattice_intersection(self, other)
    }

    /// Image of the lattice under `v ↦ v · m`.
    pub fn map(&self, m: &IntMatrix) -> Lattice {
        assert_eq!(m.rows(), self.ambient_rank);
        Lattice::from_generators(m.cols(), &self.basis.mul(m))
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(n={}, {:?})", self.ambient_rank, self.basis)
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    ambient_rank: usize,
    #[serde(with = "bigint_vecs")]
    basis: Vec<Vec<BigInt>>,
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LatticeRepr {
            ambient_rank: self.ambient_rank,
            basis: self.basis_vectors(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = LatticeRepr::deserialize(d)?;
        if repr.basis.iter().any(|r| r.len() != repr.ambient_rank) {
            return Err(serde::de::Error::custom("basis row length mismatch"));
        }
        Ok(Lattice::from_vectors(repr.ambient_rank, &repr.basis))
    }
}

/// Basis of `{ v : v · a = 0 }`.
pub fn left_kernel(a: &IntMatrix) -> IntMatrix {
    let dec = hnf(a);
    let rank = dec.rank();
    dec.u.select_rows(rank..a.rows())
}

/// Basis (as rows) of `{ x : a · x = 0 }`.
pub fn right_kernel(a: &IntMatrix) -> IntMatrix {
    left_kernel(&a.transpose())
}

/// Integer solution of `a · x = b`, or `None` when none exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.rows(), "right-hand side length must equal row count");
    let dec = snf(a);
    let c = dec.u.mul_vec(b);
    let k = a.rows().min(a.cols());
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        let di = if i < k { dec.d.get(i, i) } else { &BigInt::ZERO };
        if di.is_zero() {
            if !ci.is_zero() {
                return None;
            }
        } else {
            let (q, r) = ci.div_rem(di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(dec.v.mul_vec(&y))
}

pub fn lattice_intersection(l1: &Lattice, l2: &Lattice) -> Lattice {
    assert_eq!(l1.ambient_rank, l2.ambient_rank);
    let n = l1.ambient_rank;
    if l1.rank() == 0 || l2.rank() == 0 {
        return Lattice::zero(n);
    }
    let stacked = l1.basis.vstack(&l2.basis);
    let kernel = left_kernel(&stacked);
    let k1 = l1.rank();
    let gens: Vec<Vec<BigInt>> = (0..kernel.rows())
        .map(|r| l1.basis.left_mul_vec(&kernel.row(r)[..k1]))
        .collect();
    Lattice::from_vectors(n, &gens)
}

/// Index of one lattice inside another; infinite when ranks differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeIndex {
    Finite(#[serde(with = "crate::serde_int::bigint")] BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            LatticeIndex::Finite(k) => Some(k),
            LatticeIndex::Infinite => None,
        }
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(k) => write!(f, "{k}"),
            LatticeIndex::Infinite => write!(f, "inf"),
        }
    }
}

pub fn lattice_index(sub: &Lattice, sup: &Lattice) -> Result<LatticeIndex, LatticeError> {
    assert_eq!(sub.ambient_rank, sup.ambient_rank);
    let mut coords = Vec::with_capacity(sub.rank());
    for (i, row) in sub.basis.row_vecs().into_iter().enumerate() {
        match sup.coordinates(&row) {
            Some(c) => coords.push(c),
            None => return Err(LatticeError::NotContained { row: i }),
        }
    }
    if sub.rank() < sup.rank() {
        return Ok(LatticeIndex::Infinite);
    }
    let c = IntMatrix::from_rows(coords, sup.rank());
    Ok(LatticeIndex::Finite(c.det().abs()))
}

/// p-adic valuation; `None` stands for the valuation of zero.
pub fn valuation(v: &BigInt, p: &BigInt) -> Option<u32> {
    if v.is_zero() {
        return None;
    }
    let mut v = v.abs();
    let mut k = 0;
    loop {
        let (q, r) = v.div_rem(p);
        if !r.is_zero() {
            return Some(k);
        }
        v = q;
        k += 1;
    }
}

/// A basis `y_1..y_r` of `Z^r` with divisors `d_i` such that the sublattice is
/// spanned by the `d_i · y_i`. Zero divisors come last.
#[derive(Clone, Debug, Serialize)]
pub struct AdaptedBasis {
    #[serde(with = "bigint_vecs")]
    pub basis_vectors: Vec<Vec<BigInt>>,
    #[serde(with = "crate::serde_int::bigint_vec")]
    pub elementary_divisors: Vec<BigInt>,
    /// Order of the torsion the caller keeps alongside the free part.
    #[serde(with = "crate::serde_int::bigint")]
    pub torsion_order: BigInt,
    /// Columns give coordinates in the adapted basis: `a = x · coords`.
    #[serde(skip)]
    coords: IntMatrix,
}

impl AdaptedBasis {
    pub fn rank(&self) -> usize {
        self.basis_vectors.len()
    }

    /// Coordinates `a` with `x = Σ a_i y_i`.
    pub fn coordinates(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.coords.left_mul_vec(x)
    }

    /// First index with `ord_p(a_i) < ord_p(d_i)`, i.e. the smallest coordinate
    /// obstructing membership after inverting everything prime to `p`.
    pub fn obstruction_index(&self, x: &[BigInt], p: &BigInt) -> Option<usize> {
        let a = self.coordinates(x);
        a.iter()
            .zip(&self.elementary_divisors)
            .position(|(ai, di)| match (valuation(ai, p), valuation(di, p)) {
                (_, None) => !ai.is_zero(),
                (None, Some(_)) => false,
                (Some(va), Some(vd)) => va < vd,
            })
    }

    /// The functional `#N_tors` times projection onto `y_i`, as a vector `w`
    /// acting by `x ↦ x · w`.
    pub fn projection_functional(&self, i: usize) -> Vec<BigInt> {
        self.coords
            .column(i)
            .into_iter()
            .map(|c| c * &self.torsion_order)
            .collect()
    }
}

pub fn adapted_basis(m: &Lattice, n_rank: usize, torsion_order: &BigInt) -> AdaptedBasis {
    assert_eq!(m.ambient_rank(), n_rank);
    let (v, divisors) = if m.rank() == 0 {
        (IntMatrix::identity(n_rank), vec![BigInt::zero(); n_rank])
    } else {
        let dec = snf(m.basis());
        let mut divisors = dec.invariants();
        divisors.resize(n_rank, BigInt::zero());
        (dec.v, divisors)
    };
    let v_inv = unimodular_inverse(&v).expect("SNF transform is unimodular");
    AdaptedBasis {
        basis_vectors: v_inv.row_vecs(),
        elementary_divisors: divisors,
        torsion_order: torsion_order.clone(),
        coords: v,
    }
}

/// Whether `x ∈ M ⊗ Z_(p)` for a sublattice `M` of the free part; torsion is
/// assumed to lie inside `M`.
pub fn membership_localized(x: &[BigInt], m: &Lattice, torsion_order: &BigInt, p: &BigInt) -> bool {
    adapted_basis(m, m.ambient_rank(), torsion_order)
        .obstruction_index(x, p)
        .is_none()
}
