use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::algebra::Order;
use super::poly::{is_irreducible_over_q, mul_mod_monic, power_of_x};
use super::OrderError;
use crate::lattice::rational::{common_denominator, to_rational};
use crate::lattice::{snf, solve_rational, valuation, IntMatrix, Lattice, LatticeIndex};
use crate::lattice::lattice_index;
use crate::serde_int::{IntRepr, RatRepr};

/// One factor `Õ_j` of the normalization: a ring of integers (or any order
/// containing `Z[θ]`) in `Q[x]/(f)`, given by a rational basis in powers of
/// the root `θ`.
#[derive(Clone, Debug)]
pub struct NumberFieldComponent {
    defining_poly: Vec<BigInt>,
    ring_basis: Vec<Vec<BigRational>>,
    order: Order,
    /// `θ^k` in ring-basis coordinates, `k < degree`.
    theta_powers: Vec<Vec<BigInt>>,
    index: BigInt,
}

impl NumberFieldComponent {
    pub fn new(
        defining_poly: Vec<BigInt>,
        ring_basis: Vec<Vec<BigRational>>,
    ) -> Result<Self, OrderError> {
        let deg = defining_poly
            .len()
            .checked_sub(1)
            .filter(|&d| d > 0)
            .ok_or_else(|| OrderError::Shape("defining polynomial must have degree ≥ 1".into()))?;
        if !defining_poly[deg].is_one() {
            return Err(OrderError::NotMonic);
        }
        match is_irreducible_over_q(&defining_poly) {
            None => return Err(OrderError::UnsupportedDegree(deg)),
            Some(false) => return Err(OrderError::Reducible),
            Some(true) => {}
        }
        if ring_basis.len() != deg || ring_basis.iter().any(|w| w.len() != deg) {
            return Err(OrderError::Shape(format!(
                "ring basis must be {deg} vectors of length {deg}"
            )));
        }

        let coords_of = |target: &[BigRational]| -> Result<Vec<BigInt>, OrderError> {
            let x = solve_rational(&ring_basis, target).ok_or(OrderError::RingBasisSingular)?;
            // A solution of a singular system might exist; rank is checked below.
            if x.iter().any(|c| !c.is_integer()) {
                return Err(OrderError::RingBasisNotClosed);
            }
            Ok(x.into_iter().map(|c| c.to_integer()).collect())
        };

        let theta_powers = (0..deg)
            .map(|k| {
                coords_of(&power_of_x(k, &defining_poly)).map_err(|e| match e {
                    OrderError::RingBasisNotClosed => OrderError::PowerBasisNotIntegral,
                    other => other,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let index = IntMatrix::from_rows(theta_powers.clone(), deg).det().abs();
        if index.is_zero() {
            return Err(OrderError::RingBasisSingular);
        }

        let mut table = Vec::with_capacity(deg);
        for a in &ring_basis {
            let mut row = Vec::with_capacity(deg);
            for b in &ring_basis {
                row.push(coords_of(&mul_mod_monic(a, b, &defining_poly))?);
            }
            table.push(row);
        }
        let order = Order::new(table, theta_powers[0].clone())?;
        Ok(NumberFieldComponent {
            defining_poly,
            ring_basis,
            order,
            theta_powers,
            index,
        })
    }

    /// `Z[θ]` itself, which must then be the full normalization of its
    /// component.
    pub fn monogenic(defining_poly: Vec<BigInt>) -> Result<Self, OrderError> {
        let deg = defining_poly.len().saturating_sub(1);
        let basis = (0..deg)
            .map(|i| {
                (0..deg)
                    .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        Self::new(defining_poly, basis)
    }

    pub fn degree(&self) -> usize {
        self.defining_poly.len() - 1
    }

    pub fn defining_poly(&self) -> &[BigInt] {
        &self.defining_poly
    }

    pub fn ring_basis(&self) -> &[Vec<BigRational>] {
        &self.ring_basis
    }

    /// The ring structure on `Õ_j` in ring-basis coordinates.
    pub fn order(&self) -> &Order {
        &self.order
    }

    /// `[Õ_j : Z[θ]]`
    pub fn index(&self) -> &BigInt {
        &self.index
    }

    /// `g(θ)` in ring-basis coordinates for an integer polynomial `g`.
    pub fn poly_element(&self, g: &[BigInt]) -> Vec<BigInt> {
        let deg = self.degree();
        let mut out = vec![BigInt::zero(); deg];
        for (k, gk) in g.iter().enumerate() {
            if gk.is_zero() {
                continue;
            }
            if k < deg {
                for (o, t) in out.iter_mut().zip(&self.theta_powers[k]) {
                    *o += gk * t;
                }
            } else {
                for (m, c) in power_of_x(k, &self.defining_poly).iter().enumerate() {
                    let c = c.to_integer() * gk;
                    for (o, t) in out.iter_mut().zip(&self.theta_powers[m]) {
                        *o += &c * t;
                    }
                }
            }
        }
        out
    }
}

/// `Õ = ∏ Õ_j` together with the embedding of `O`; row `i` of the embedding
/// is the image of the `i`-th basis element of `O` in concatenated
/// ring-basis coordinates.
#[derive(Clone, Debug)]
pub struct Normalization {
    pub components: Vec<NumberFieldComponent>,
    pub embedding: IntMatrix,
}

/// An order whose normalization data has been checked.
#[derive(Clone, Debug)]
pub struct NormalizedOrder {
    order: Order,
    normalization: Normalization,
    maximal: Order,
    offsets: Vec<usize>,
    image: Lattice,
    /// `det(E) · E^{-1}`
    adjugate: IntMatrix,
    det: BigInt,
}

pub fn check_order(order: Order, nrm: Normalization) -> Result<NormalizedOrder, OrderError> {
    order.check_laws()?;
    let n = order.rank();
    let total: usize = nrm.components.iter().map(NumberFieldComponent::degree).sum();
    let e = &nrm.embedding;
    if e.rows() != n || e.cols() != total {
        if e.rows() == n && total > n {
            return Err(OrderError::InfiniteCokernel);
        }
        if e.rows() == n && total < n {
            return Err(OrderError::EmbeddingNotInjective);
        }
        return Err(OrderError::Shape(format!(
            "embedding is {}x{}, expected {n}x{total}",
            e.rows(),
            e.cols()
        )));
    }
    let parts: Vec<Order> = nrm.components.iter().map(|c| c.order().clone()).collect();
    let maximal = Order::product(&parts);

    let embed = |v: &[BigInt]| e.left_mul_vec(v);
    if embed(order.unity()) != maximal.unity() {
        return Err(OrderError::EmbeddingNotRingMap);
    }
    for i in 0..n {
        for j in i..n {
            let lhs = embed(&order.mul(&order.basis_element(i), &order.basis_element(j)));
            let rhs = maximal.mul(e.row(i), e.row(j));
            if lhs != rhs {
                return Err(OrderError::EmbeddingNotRingMap);
            }
        }
    }
    let image = Lattice::from_generators(total, e);
    if image.rank() < n {
        return Err(OrderError::EmbeddingNotInjective);
    }
    match lattice_index(&image, &Lattice::full(total)) {
        Ok(LatticeIndex::Finite(_)) => {}
        _ => return Err(OrderError::InfiniteCokernel),
    }

    let det = e.det();
    let rational_rows: Vec<Vec<BigRational>> = e.row_vecs().iter().map(|r| to_rational(r)).collect();
    let mut inv_rows = Vec::with_capacity(n);
    for k in 0..n {
        let mut unit = vec![BigRational::zero(); n];
        unit[k] = BigRational::one();
        let row = solve_rational(&rational_rows, &unit).expect("nonsingular embedding");
        inv_rows.push(
            row.iter()
                .map(|q| (q * BigRational::from_integer(det.clone())).to_integer())
                .collect(),
        );
    }
    let adjugate = IntMatrix::from_rows(inv_rows, n);

    let mut offsets = Vec::with_capacity(nrm.components.len());
    let mut off = 0;
    for c in &nrm.components {
        offsets.push(off);
        off += c.degree();
    }
    Ok(NormalizedOrder {
        order,
        normalization: nrm,
        maximal,
        offsets,
        image,
        adjugate,
        det,
    })
}

/// `c · p^d` is the exponent of `Õ/O` with `gcd(c, p) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentData {
    pub p: u64,
    #[serde(with = "crate::serde_int::bigint")]
    pub c: BigInt,
    pub d: u32,
}

impl ExponentData {
    pub fn exponent(&self) -> BigInt {
        &self.c * BigInt::from(self.p).pow(self.d)
    }
}

impl NormalizedOrder {
    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn rank(&self) -> usize {
        self.order.rank()
    }

    pub fn normalization(&self) -> &Normalization {
        &self.normalization
    }

    pub fn components(&self) -> &[NumberFieldComponent] {
        &self.normalization.components
    }

    /// `Õ` as a single order in concatenated coordinates.
    pub fn maximal(&self) -> &Order {
        &self.maximal
    }

    pub fn component_offset(&self, j: usize) -> usize {
        self.offsets[j]
    }

    pub fn total_degree(&self) -> usize {
        self.maximal.rank()
    }

    /// Image of `O` inside `Õ`.
    pub fn image(&self) -> &Lattice {
        &self.image
    }

    pub fn embed(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.normalization.embedding.left_mul_vec(x)
    }

    /// The `O`-coordinates of `v ∈ Õ`, if `v` lies in the image of `O`.
    pub fn pullback(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let scaled = self.adjugate.left_mul_vec(v);
        let mut out = Vec::with_capacity(scaled.len());
        for s in scaled {
            let (q, r) = s.div_rem(&self.det);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(out)
    }

    /// Pull back a sublattice of `Õ`, intersecting with the image first.
    pub fn pullback_lattice(&self, l: &Lattice) -> Lattice {
        let inter = l.intersection(&self.image);
        let rows: Vec<Vec<BigInt>> = inter
            .basis_vectors()
            .iter()
            .map(|v| self.pullback(v).expect("vector of the image"))
            .collect();
        Lattice::from_vectors(self.rank(), &rows)
    }

    /// The full `Z`-exponent of `Õ/O`.
    pub fn cokernel_exponent(&self) -> BigInt {
        snf(&self.normalization.embedding)
            .invariants()
            .into_iter()
            .fold(BigInt::one(), |acc, d| acc.lcm(&d))
    }

    pub fn exponent_decomposition(&self, p: u64) -> ExponentData {
        let exp = self.cokernel_exponent();
        let pb = BigInt::from(p);
        let d = valuation(&exp, &pb).expect("nonzero exponent");
        let c = exp / pb.pow(d);
        ExponentData { p, c, d }
    }

    /// `Õ_j` as a sublattice of `Õ`, embedded in block `j`.
    pub(crate) fn block_lattice(&self, j: usize, inner: &Lattice) -> Lattice {
        let total = self.total_degree();
        let off = self.offsets[j];
        let deg = self.components()[j].degree();
        let mut rows = Vec::new();
        for v in inner.basis_vectors() {
            let mut r = vec![BigInt::zero(); total];
            r[off..off + deg].clone_from_slice(&v);
            rows.push(r);
        }
        Lattice::from_vectors(total, &rows)
    }

    /// `Õ_j` extended by everything else: the lattice `inner ⊕ ∏_{k≠j} Õ_k`.
    pub(crate) fn extend_by_full(&self, j: usize, inner: &Lattice) -> Lattice {
        let total = self.total_degree();
        let off = self.offsets[j];
        let deg = self.components()[j].degree();
        let mut rows = self.block_lattice(j, inner).basis_vectors();
        for k in (0..total).filter(|k| !(off..off + deg).contains(k)) {
            let mut r = vec![BigInt::zero(); total];
            r[k] = BigInt::one();
            rows.push(r);
        }
        Lattice::from_vectors(total, &rows)
    }

    /// The idempotent of component `j` in `O ⊗ Q`, in `O`-coordinates.
    pub fn idempotent(&self, j: usize) -> Vec<BigRational> {
        let off = self.offsets[j];
        let deg = self.components()[j].degree();
        let mut u = vec![BigInt::zero(); self.total_degree()];
        u[off..off + deg].clone_from_slice(self.components()[j].order().unity());
        let det = BigRational::from_integer(self.det.clone());
        self.adjugate
            .left_mul_vec(&u)
            .into_iter()
            .map(|c| BigRational::from_integer(c) / &det)
            .collect()
    }

    /// `(k ε_J, k)` with `k` the least positive integer making `k ε_J ∈ O`.
    pub fn scaled_idempotent(&self, components: &[usize]) -> (Vec<BigInt>, BigInt) {
        let mut eps = vec![BigRational::zero(); self.rank()];
        for &j in components {
            for (e, c) in eps.iter_mut().zip(self.idempotent(j)) {
                *e += c;
            }
        }
        clear_denominators(&eps)
    }

    /// Components `j` on which the element `x ∈ O` has nonzero image.
    pub fn support(&self, x: &[BigInt]) -> Vec<usize> {
        let img = self.embed(x);
        (0..self.components().len())
            .filter(|&j| {
                let off = self.offsets[j];
                img[off..off + self.components()[j].degree()]
                    .iter()
                    .any(|c| !c.is_zero())
            })
            .collect()
    }

    /// `O ∩ Õ_j` in `O`-coordinates.
    pub fn component_intersection(&self, j: usize) -> Lattice {
        let deg = self.components()[j].degree();
        self.pullback_lattice(&self.block_lattice(j, &Lattice::full(deg)))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub defining_poly: Vec<IntRepr>,
    pub ring_basis: Vec<Vec<RatRepr>>,
}

/// JSON shape of a normalized order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrderSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rank: usize,
    pub mult_table: Vec<Vec<Vec<IntRepr>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unity: Option<Vec<IntRepr>>,
    pub components: Vec<ComponentSpec>,
    pub embedding: Vec<Vec<IntRepr>>,
}

fn ints(v: Vec<IntRepr>) -> Result<Vec<BigInt>, OrderError> {
    v.into_iter()
        .map(BigInt::try_from)
        .collect::<Result<_, _>>()
        .map_err(OrderError::Parse)
}

impl OrderSpec {
    pub fn build(self) -> Result<NormalizedOrder, OrderError> {
        let n = self.rank;
        let table = self
            .mult_table
            .into_iter()
            .map(|row| row.into_iter().map(ints).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        if table.len() != n {
            return Err(OrderError::Shape(format!("mult_table has {} rows, rank is {n}", table.len())));
        }
        let unity = match self.unity {
            Some(u) => ints(u)?,
            None => (0..n).map(|i| if i == 0 { BigInt::one() } else { BigInt::zero() }).collect(),
        };
        let order = Order::new(table, unity)?;
        let components = self
            .components
            .into_iter()
            .map(|c| {
                let poly = ints(c.defining_poly)?;
                let basis = c
                    .ring_basis
                    .into_iter()
                    .map(|w| {
                        w.into_iter()
                            .map(BigRational::try_from)
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(OrderError::Parse)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                NumberFieldComponent::new(poly, basis)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let rows = self
            .embedding
            .into_iter()
            .map(ints)
            .collect::<Result<Vec<_>, _>>()?;
        let total: usize = components.iter().map(NumberFieldComponent::degree).sum();
        if rows.iter().any(|r| r.len() != total) {
            return Err(OrderError::Shape("embedding row length must equal total component degree".into()));
        }
        let embedding = IntMatrix::from_rows(rows, total);
        check_order(order, Normalization { components, embedding })
    }
}

impl From<&NormalizedOrder> for OrderSpec {
    fn from(o: &NormalizedOrder) -> Self {
        let repr = |v: &[BigInt]| v.iter().map(IntRepr::from).collect::<Vec<_>>();
        OrderSpec {
            name: None,
            rank: o.rank(),
            mult_table: o
                .order
                .mult_table()
                .iter()
                .map(|row| row.iter().map(|v| repr(v)).collect())
                .collect(),
            unity: Some(repr(o.order.unity())),
            components: o
                .components()
                .iter()
                .map(|c| ComponentSpec {
                    defining_poly: repr(c.defining_poly()),
                    ring_basis: c
                        .ring_basis()
                        .iter()
                        .map(|w| w.iter().map(RatRepr::from).collect())
                        .collect(),
                })
                .collect(),
            embedding: o.normalization.embedding.row_vecs().iter().map(|r| repr(r)).collect(),
        }
    }
}

impl Serialize for NormalizedOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OrderSpec::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormalizedOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        OrderSpec::deserialize(d)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}

/// Denominator-free multiple of a rational vector, with the multiplier.
pub(crate) fn clear_denominators(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let m = common_denominator(v);
    let ints = v
        .iter()
        .map(|q| (q * BigRational::from_integer(m.clone())).to_integer())
        .collect();
    (ints, m)
}
