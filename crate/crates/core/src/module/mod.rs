//! Finitely generated modules over an order, presented as
//! `Z^r ⊕ Z/t_1 ⊕ … ⊕ Z/t_s` with the order acting by integer matrices.
//!
//! Elements are row vectors of length `r + s`; an order element `β` acts by
//! `x ↦ x · A_β`. Coordinates past `r` are only meaningful modulo `t_k`.

mod finite;
mod hom;
mod prebasis;
mod spec;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::lattice::{snf, unimodular_inverse, IntMatrix, Lattice};
use crate::order::{NormalizedOrder, OrderError};

pub use finite::{crt_maps, evil_check, CrtReport, EvilContext, EvilVerdict, FiniteOModule};
pub use hom::{eta0, full_map_cokernel_bound, hom_lattice, Eta0};
pub use prebasis::{
    index_set, prebasis_adapted, prebasis_construct, AdaptedPreBasis, IndexSet, PreBasis,
};
pub use spec::{IdealSource, ModuleSource, ModuleSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error("malformed module: {0}")]
    Shape(String),
    #[error("action of basis element {k} does not preserve the torsion relations")]
    ActionNotWellDefined { k: usize },
    #[error("action violates the ring laws: {0}")]
    ActionLaw(String),
    #[error("element is torsion")]
    TorsionElement,
    #[error("element already lies in the submodule after localizing at p")]
    AlreadyLocalMember,
    #[error("hypotheses {0:?} fail")]
    HypothesisFailed(Vec<u8>),
    #[error("module is not finite")]
    NotFinite,
    #[error("module has {0} elements, too many to enumerate")]
    TooLarge(BigInt),
    #[error("cokernel is infinite")]
    InfiniteCokernel,
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Order(#[from] OrderError),
}

#[derive(Clone, Debug)]
pub struct OModule {
    order: Arc<NormalizedOrder>,
    free_rank: usize,
    torsion: Vec<BigInt>,
    action: Vec<IntMatrix>,
}

impl OModule {
    /// Validates the action against the ring laws and the torsion relations.
    pub fn new(
        order: Arc<NormalizedOrder>,
        free_rank: usize,
        torsion: Vec<BigInt>,
        action: Vec<IntMatrix>,
    ) -> Result<Self, ModuleError> {
        let m = free_rank + torsion.len();
        let n = order.rank();
        if action.len() != n {
            return Err(ModuleError::Shape(format!(
                "{} action matrices for an order of rank {n}",
                action.len()
            )));
        }
        if action.iter().any(|a| a.rows() != m || a.cols() != m) {
            return Err(ModuleError::Shape(format!("action matrices must be {m}x{m}")));
        }
        if torsion.iter().any(|t| t < &BigInt::from(2)) {
            return Err(ModuleError::Shape("torsion orders must be at least 2".into()));
        }
        let module = OModule {
            order,
            free_rank,
            torsion,
            action,
        };
        module.check_action()?;
        Ok(module)
    }

    fn check_action(&self) -> Result<(), ModuleError> {
        let r = self.free_rank;
        let rel = self.relations();
        for (k, a) in self.action.iter().enumerate() {
            for (j, t) in self.torsion.iter().enumerate() {
                let row: Vec<BigInt> = a.row(r + j).iter().map(|e| e * t).collect();
                if !rel.contains(&row) {
                    return Err(ModuleError::ActionNotWellDefined { k });
                }
            }
        }
        let m = self.dim();
        let order = self.order.order();
        let unity = self.action_matrix(order.unity());
        if !self.rows_congruent(&unity, &IntMatrix::identity(m)) {
            return Err(ModuleError::ActionLaw("unity does not act as the identity".into()));
        }
        let n = order.rank();
        for i in 0..n {
            for j in i..n {
                let prod = order.mul(&order.basis_element(i), &order.basis_element(j));
                let lhs = self.action[i].mul(&self.action[j]);
                if !self.rows_congruent(&lhs, &self.action_matrix(&prod)) {
                    return Err(ModuleError::ActionLaw(format!(
                        "basis elements {i} and {j} do not act compatibly"
                    )));
                }
            }
        }
        Ok(())
    }

    fn rows_congruent(&self, a: &IntMatrix, b: &IntMatrix) -> bool {
        (0..a.rows()).all(|i| {
            let d: Vec<BigInt> = a.row(i).iter().zip(b.row(i)).map(|(x, y)| x - y).collect();
            self.is_zero(&d)
        })
    }

    /// Quotient of `Z^m` (with the given action) by an `O`-stable sublattice,
    /// brought into `Z^r ⊕ ⊕ Z/t_k` shape through a Smith form.
    pub fn from_presentation(
        order: Arc<NormalizedOrder>,
        action: &[IntMatrix],
        relations: &Lattice,
    ) -> Result<Self, ModuleError> {
        let m = relations.ambient_rank();
        let (v, divisors) = if relations.rank() == 0 {
            (IntMatrix::identity(m), vec![BigInt::zero(); m])
        } else {
            let dec = snf(relations.basis());
            let mut d = dec.invariants();
            d.resize(m, BigInt::zero());
            (dec.v, d)
        };
        let v_inv = unimodular_inverse(&v).expect("unimodular transform");
        // New coordinates x' = x·V; keep free ones first, drop trivial ones.
        let free: Vec<usize> = (0..m).filter(|&k| divisors[k].is_zero()).collect();
        let tors: Vec<usize> = (0..m)
            .filter(|&k| !divisors[k].is_zero() && !divisors[k].is_one())
            .collect();
        let keep: Vec<usize> = free.iter().chain(&tors).copied().collect();
        let new_action = action
            .iter()
            .map(|a| {
                let full = v_inv.mul(a).mul(&v);
                let rows = keep
                    .iter()
                    .map(|&i| keep.iter().map(|&j| full.get(i, j).clone()).collect())
                    .collect();
                IntMatrix::from_rows(rows, keep.len())
            })
            .collect();
        let torsion = tors.iter().map(|&k| divisors[k].clone()).collect();
        OModule::new(order, free.len(), torsion, new_action)
    }

    /// `O^k`
    pub fn free(order: Arc<NormalizedOrder>, k: usize) -> Self {
        let n = order.rank();
        let action = (0..n)
            .map(|b| {
                let mb = order.order().mult_matrix(&order.order().basis_element(b));
                block_diagonal(&vec![mb; k])
            })
            .collect();
        OModule {
            order,
            free_rank: n * k,
            torsion: Vec::new(),
            action,
        }
    }

    /// An ideal of `O` viewed as a module, in the coordinates of its basis.
    pub fn from_ideal(order: Arc<NormalizedOrder>, ideal: &Lattice) -> Result<Self, ModuleError> {
        let n = order.rank();
        if ideal.rank() != n {
            return Err(ModuleError::Shape("ideal must have full rank".into()));
        }
        let b = ideal.basis();
        let mut action = Vec::with_capacity(n);
        for k in 0..n {
            let mk = order.order().mult_matrix(&order.order().basis_element(k));
            let images = b.mul(&mk);
            let rows = (0..n)
                .map(|i| {
                    ideal.coordinates(images.row(i)).ok_or_else(|| {
                        ModuleError::Shape("lattice is not closed under the order".into())
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            action.push(IntMatrix::from_rows(rows, n));
        }
        OModule::new(order, n, Vec::new(), action)
    }

    pub fn direct_sum(&self, other: &OModule) -> OModule {
        // Free coordinates of both first, then the torsion coordinates.
        let (r1, s1) = (self.free_rank, self.torsion.len());
        let (r2, s2) = (other.free_rank, other.torsion.len());
        let m = r1 + s1 + r2 + s2;
        let place = |which: usize, idx: usize| -> usize {
            match which {
                0 if idx < r1 => idx,
                0 => r1 + r2 + (idx - r1),
                _ if idx < r2 => r1 + idx,
                _ => r1 + r2 + s1 + (idx - r2),
            }
        };
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut out = IntMatrix::zeros(m, m);
                for (which, mat) in [(0usize, a), (1usize, b)] {
                    for i in 0..mat.rows() {
                        for j in 0..mat.cols() {
                            out.set(place(which, i), place(which, j), mat.get(i, j).clone());
                        }
                    }
                }
                out
            })
            .collect();
        let mut torsion = self.torsion.clone();
        torsion.extend(other.torsion.iter().cloned());
        OModule {
            order: self.order.clone(),
            free_rank: r1 + r2,
            torsion,
            action,
        }
    }

    /// `N / L` for an `O`-stable lattice `L` of the presentation (relations
    /// are added automatically).
    pub fn quotient(&self, sub: &Lattice) -> Result<OModule, ModuleError> {
        let rel = self.relations().sum(sub);
        if !self.is_submodule(&rel) {
            return Err(ModuleError::Shape("quotient by a non-submodule".into()));
        }
        OModule::from_presentation(self.order.clone(), &self.action, &rel)
    }

    /// `N / kN`
    pub fn quotient_by_scalar(&self, k: &BigInt) -> Result<OModule, ModuleError> {
        self.quotient(&Lattice::scaled_full(self.dim(), k))
    }

    /// `N / I N`
    pub fn quotient_by_ideal(&self, ideal: &Lattice) -> Result<OModule, ModuleError> {
        self.quotient(&self.ideal_times_module(ideal))
    }

    pub fn order(&self) -> &NormalizedOrder {
        &self.order
    }

    pub fn order_arc(&self) -> &Arc<NormalizedOrder> {
        &self.order
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn action(&self) -> &[IntMatrix] {
        &self.action
    }

    /// Length of element vectors.
    pub fn dim(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// `#N_tors`
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Exponent of `N_tors`.
    pub fn torsion_exponent(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, t| acc.lcm(t))
    }

    /// Lattice of the relations `t_k e_{r+k}`.
    pub fn relations(&self) -> Lattice {
        let m = self.dim();
        let rows: Vec<Vec<BigInt>> = self
            .torsion
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let mut v = vec![BigInt::zero(); m];
                v[self.free_rank + k] = t.clone();
                v
            })
            .collect();
        Lattice::from_vectors(m, &rows)
    }

    pub fn basis_element(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim()];
        v[i] = BigInt::one();
        v
    }

    /// Canonical representative: torsion coordinates reduced into `[0, t_k)`.
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut out = x.to_vec();
        for (k, t) in self.torsion.iter().enumerate() {
            let c = &mut out[self.free_rank + k];
            *c = c.mod_floor(t);
        }
        out
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.reduce(x).iter().all(Zero::is_zero)
    }

    pub fn equal(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        self.reduce(x) == self.reduce(y)
    }

    pub fn is_torsion(&self, x: &[BigInt]) -> bool {
        x[..self.free_rank].iter().all(Zero::is_zero)
    }

    pub fn add(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        self.reduce(&x.iter().zip(y).map(|(a, b)| a + b).collect::<Vec<_>>())
    }

    pub fn scale(&self, k: &BigInt, x: &[BigInt]) -> Vec<BigInt> {
        self.reduce(&x.iter().map(|a| a * k).collect::<Vec<_>>())
    }

    /// `A_β = Σ β_k A_k`
    pub fn action_matrix(&self, beta: &[BigInt]) -> IntMatrix {
        let m = self.dim();
        let mut out = IntMatrix::zeros(m, m);
        for (bk, ak) in beta.iter().zip(&self.action) {
            if !bk.is_zero() {
                out = out.add(&ak.scale(bk));
            }
        }
        out
    }

    /// `β · x`
    pub fn act(&self, beta: &[BigInt], x: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.dim()];
        for (bk, ak) in beta.iter().zip(&self.action) {
            if bk.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(ak.left_mul_vec(x)) {
                *o += bk * v;
            }
        }
        self.reduce(&out)
    }

    /// The `Z`-lattice `Σ O·g + relations`.
    pub fn span(&self, gens: &[Vec<BigInt>]) -> Lattice {
        let mut rows = Vec::with_capacity(gens.len() * self.action.len());
        for g in gens {
            for a in &self.action {
                rows.push(a.left_mul_vec(g));
            }
        }
        self.relations().sum(&Lattice::from_vectors(self.dim(), &rows))
    }

    /// `Z`-span of the given elements plus relations.
    pub fn z_span(&self, gens: &[Vec<BigInt>]) -> Lattice {
        self.relations().sum(&Lattice::from_vectors(self.dim(), gens))
    }

    /// `I · N` for an ideal `I` of `O` given by a lattice.
    pub fn ideal_times_module(&self, ideal: &Lattice) -> Lattice {
        let mut rows = Vec::new();
        for beta in ideal.basis_vectors() {
            rows.extend(self.action_matrix(&beta).row_vecs());
        }
        self.relations().sum(&Lattice::from_vectors(self.dim(), &rows))
    }

    /// `k N`
    pub fn scalar_multiple_lattice(&self, k: &BigInt) -> Lattice {
        self.relations().sum(&Lattice::scaled_full(self.dim(), k))
    }

    /// `N[k]`, the `k`-torsion.
    pub fn kernel_of_scalar(&self, k: &BigInt) -> Lattice {
        let m = self.dim();
        let rows: Vec<Vec<BigInt>> = self
            .torsion
            .iter()
            .enumerate()
            .map(|(j, t)| {
                let mut v = vec![BigInt::zero(); m];
                v[self.free_rank + j] = t / t.gcd(k);
                v
            })
            .collect();
        self.relations().sum(&Lattice::from_vectors(m, &rows))
    }

    /// Whether a lattice containing the relations is stable under `O`.
    pub fn is_submodule(&self, l: &Lattice) -> bool {
        l.basis_vectors()
            .iter()
            .all(|v| self.action.iter().all(|a| l.contains(&a.left_mul_vec(v))))
    }

    /// Rank of the free part of a lattice containing the relations.
    pub fn free_rank_of(&self, l: &Lattice) -> usize {
        l.rank() - self.torsion.len()
    }

    /// Whether `O·y` meets `N_tors` nontrivially.
    pub fn span_has_torsion(&self, y: &[BigInt]) -> bool {
        if self.torsion.is_empty() {
            return false;
        }
        let r = self.free_rank;
        let n = self.action.len();
        let images: Vec<Vec<BigInt>> = self.action.iter().map(|a| a.left_mul_vec(y)).collect();
        let free_part = IntMatrix::from_rows(images.iter().map(|v| v[..r].to_vec()).collect(), r);
        let kernel = crate::lattice::left_kernel(&free_part);
        (0..kernel.rows()).any(|row| {
            let mut acc = vec![BigInt::zero(); self.dim()];
            for (k, img) in images.iter().enumerate().take(n) {
                let c = kernel.get(row, k);
                if c.is_zero() {
                    continue;
                }
                for (a, v) in acc.iter_mut().zip(img) {
                    *a += c * v;
                }
            }
            !self.is_zero(&acc)
        })
    }
}

pub(crate) fn block_diagonal(blocks: &[IntMatrix]) -> IntMatrix {
    let m: usize = blocks.iter().map(IntMatrix::rows).sum();
    let mut out = IntMatrix::zeros(m, m);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out.set(off + i, off + j, b.get(i, j).clone());
            }
        }
        off += b.rows();
    }
    out
}

/// `(g, w)` where `g > 0` generates the ideal of values of coordinate `c` over
/// the row lattice of `basis`, and `w` is a lattice vector with `w[c] = g`.
pub(crate) fn min_positive_coordinate(basis: &IntMatrix, c: usize) -> Option<(BigInt, Vec<BigInt>)> {
    let mut g = BigInt::zero();
    let mut w = vec![BigInt::zero(); basis.cols()];
    for row in 0..basis.rows() {
        let v = basis.get(row, c);
        if v.is_zero() {
            continue;
        }
        let e = g.extended_gcd(v);
        // e.gcd = e.x·g + e.y·v
        let next: Vec<BigInt> = w
            .iter()
            .zip(basis.row(row))
            .map(|(a, b)| &e.x * a + &e.y * b)
            .collect();
        w = next;
        g = e.gcd;
    }
    if g.is_zero() {
        return None;
    }
    if g < BigInt::zero() {
        g = -g;
        w.iter_mut().for_each(|x| *x = -&*x);
    }
    Some((g, w))
}
