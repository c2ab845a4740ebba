use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::hom::{compose_with_full_map, eta0, hom_lattice};
use super::{min_positive_coordinate, ModuleError, OModule};
use crate::lattice::rational::common_denominator;
use crate::lattice::{
    adapted_basis, lattice_index, left_kernel, right_kernel, solve_integer, solve_rational,
    IntMatrix, Lattice, LatticeIndex,
};

/// Elements `y_1..y_r` with `⊕ O·y_i ↪ N` of finite cokernel, together with
/// maps `ψ_i : N → O` such that `η·y = Σ ψ_i(y)·y_i` for all `y`.
#[derive(Clone, Debug, Serialize)]
pub struct PreBasis {
    #[serde(with = "crate::serde_int::bigint_vecs")]
    pub elements: Vec<Vec<BigInt>>,
    #[serde(with = "crate::serde_int::bigint")]
    pub eta_prime: BigInt,
    #[serde(with = "crate::serde_int::bigint_vec")]
    pub eta0_values: Vec<BigInt>,
    #[serde(with = "crate::serde_int::bigint")]
    pub eta: BigInt,
    /// `ψ_i` as an `(r+s) × n` matrix acting by `x ↦ x · ψ_i`.
    pub psi: Vec<IntMatrix>,
}

impl PreBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn psi_apply(&self, i: usize, x: &[BigInt]) -> Vec<BigInt> {
        self.psi[i].left_mul_vec(x)
    }

    /// `η·x = Σ ψ_i(x)·y_i` in `N`.
    pub fn check_identity(&self, module: &OModule, x: &[BigInt]) -> bool {
        let lhs = module.scale(&self.eta, x);
        let mut rhs = vec![BigInt::zero(); module.dim()];
        for (i, y) in self.elements.iter().enumerate() {
            rhs = module.add(&rhs, &module.act(&self.psi_apply(i, x), y));
        }
        module.equal(&lhs, &rhs)
    }
}

/// Whether `O·y_1 + … + O·y_k` is direct and each summand torsion-free.
fn is_direct(module: &OModule, elements: &[Vec<BigInt>]) -> bool {
    let total = module.free_rank_of(&module.span(elements));
    let parts: usize = elements
        .iter()
        .map(|y| module.free_rank_of(&module.span(std::slice::from_ref(y))))
        .sum();
    total == parts && elements.iter().all(|y| !module.span_has_torsion(y))
}

/// Greedy extension: repeatedly add the candidate raising the free rank of
/// the span most (first on ties). Overlap with the current span is removed
/// by an idempotent, torsion in `O·y` by the torsion exponent.
fn extend_prebasis(
    module: &OModule,
    mut elements: Vec<Vec<BigInt>>,
    candidates: &[Vec<BigInt>],
    target_rank: usize,
) -> Result<Vec<Vec<BigInt>>, ModuleError> {
    let no = module.order();
    let mut span = module.span(&elements);
    while module.free_rank_of(&span) < target_rank {
        let base = module.free_rank_of(&span);
        let mut best: Option<(usize, usize)> = None;
        for (idx, c) in candidates.iter().enumerate() {
            let gain = module.free_rank_of(&span.sum(&module.span(std::slice::from_ref(c)))) - base;
            if gain > 0 && best.is_none_or(|(_, g)| gain > g) {
                best = Some((idx, gain));
            }
        }
        let (idx, gain) =
            best.ok_or_else(|| ModuleError::Internal("candidates do not span the target".into()))?;
        let mut y = candidates[idx].clone();
        if module.free_rank_of(&module.span(std::slice::from_ref(&y))) > gain {
            let fresh: Vec<usize> = (0..no.components().len())
                .filter(|&j| {
                    let (e, _) = no.scaled_idempotent(&[j]);
                    let part = module.act(&e, &y);
                    module.free_rank_of(&span.sum(&module.span(&[part]))) > base
                })
                .collect();
            let (e, _) = no.scaled_idempotent(&fresh);
            y = module.act(&e, &y);
        }
        if module.span_has_torsion(&y) {
            y = module.scale(&module.torsion_exponent(), &y);
        }
        span = span.sum(&module.span(std::slice::from_ref(&y)));
        elements.push(y);
    }
    if !is_direct(module, &elements) {
        return Err(ModuleError::Internal("pre-basis sum is not direct".into()));
    }
    Ok(elements)
}

/// Computes `η′`, the `η₀(y_i)` and the maps `ψ_i` for given elements.
pub(crate) fn complete_prebasis(
    module: &OModule,
    elements: Vec<Vec<BigInt>>,
) -> Result<PreBasis, ModuleError> {
    let m = module.dim();
    let order = module.order().order();
    let n = order.rank();
    let span = module.span(&elements);
    let eta_prime = match lattice_index(&span, &Lattice::full(m)) {
        Ok(LatticeIndex::Finite(k)) => k,
        _ => return Err(ModuleError::Internal("pre-basis has infinite cokernel".into())),
    };
    let etas = elements
        .iter()
        .map(|y| eta0(module, y))
        .collect::<Result<Vec<_>, _>>()?;
    let eta0_values: Vec<BigInt> = etas.iter().map(|e| e.value.clone()).collect();
    let eta = eta0_values.iter().fold(eta_prime.clone(), |acc, e| acc * e);

    // Rows e_k·y_i for every i, k, then the torsion relations.
    let mut gens = Vec::new();
    for y in &elements {
        for a in module.action() {
            gens.push(a.left_mul_vec(y));
        }
    }
    gens.extend(module.relations().basis_vectors());
    let g = IntMatrix::from_rows(gens, m).transpose();

    let k = elements.len();
    let mut psi = vec![IntMatrix::zeros(m, n); k];
    for a in 0..m {
        let target: Vec<BigInt> = module
            .basis_element(a)
            .iter()
            .map(|c| c * &eta_prime)
            .collect();
        let x = solve_integer(&g, &target)
            .ok_or_else(|| ModuleError::Internal("η′ does not kill the cokernel".into()))?;
        for i in 0..k {
            let alpha = &x[i * n..(i + 1) * n];
            let others: BigInt = eta0_values
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, e)| e.clone())
                .product();
            let val = order.mul(alpha, &etas[i].gamma);
            for (c, v) in val.into_iter().enumerate() {
                psi[i].set(a, c, v * &others);
            }
        }
    }
    Ok(PreBasis {
        elements,
        eta_prime,
        eta0_values,
        eta,
        psi,
    })
}

pub fn prebasis_construct(module: &OModule) -> Result<PreBasis, ModuleError> {
    let r = module.free_rank();
    let candidates: Vec<Vec<BigInt>> = (0..r).map(|i| module.basis_element(i)).collect();
    let elements = extend_prebasis(module, Vec::new(), &candidates, r)?;
    complete_prebasis(module, elements)
}

/// A pre-basis whose first map separates `x` from `M` modulo high powers of
/// `p`, with the least exponent `a` for which `ψ₁(x) ∉ ψ₁(M) + p^a O`.
#[derive(Clone, Debug, Serialize)]
pub struct AdaptedPreBasis {
    pub prebasis: PreBasis,
    pub witness_exponent: u32,
    /// Position in the adapted basis of `M` whose coordinate obstructs.
    pub obstruction_index: usize,
    /// Components where `ψ ⊗ Q` is nonzero.
    pub components: Vec<usize>,
    /// `b` with `t∘ψ = b·ψ₀`.
    #[serde(with = "crate::serde_int::bigint")]
    pub scaling: BigInt,
}

const WITNESS_SEARCH_LIMIT: u32 = 1024;

/// `M` is the O-span of `m_gens` together with the torsion of `N`.
pub fn prebasis_adapted(
    module: &OModule,
    m_gens: &[Vec<BigInt>],
    x: &[BigInt],
    p: u64,
) -> Result<AdaptedPreBasis, ModuleError> {
    let r = module.free_rank();
    let mdim = module.dim();
    let no = module.order();
    let n = no.rank();
    let pb = BigInt::from(p);

    let mut all_gens = m_gens.to_vec();
    all_gens.extend((r..mdim).map(|i| module.basis_element(i)));
    let m_lattice = module.span(&all_gens);
    let m_free = Lattice::from_vectors(
        r,
        &m_lattice
            .basis_vectors()
            .iter()
            .map(|v| v[..r].to_vec())
            .collect::<Vec<_>>(),
    );
    let ab = adapted_basis(&m_free, r, &module.torsion_order());
    let i0 = ab
        .obstruction_index(&x[..r], &pb)
        .ok_or(ModuleError::AlreadyLocalMember)?;
    let psi0 = ab.projection_functional(i0);

    // ψ ∈ Hom_O(N, O) with t∘ψ = b·ψ₀ and b minimal.
    let t = no.full_map_construct();
    let homs = hom_lattice(module);
    let l = homs.len();
    let mut rows = Vec::with_capacity(r);
    for a in 0..r {
        let mut eq = vec![BigInt::zero(); l + 1];
        for (idx, f) in homs.iter().enumerate() {
            eq[idx] = compose_with_full_map(f, &t, r)[a].clone();
        }
        eq[l] = -psi0[a].clone();
        rows.push(eq);
    }
    let kernel = right_kernel(&IntMatrix::from_rows(rows, l + 1));
    let (scaling, comb) = min_positive_coordinate(&kernel, l)
        .ok_or_else(|| ModuleError::Internal("projection not in the image of Hom".into()))?;
    let mut psi = IntMatrix::zeros(mdim, n);
    for (c, f) in comb[..l].iter().zip(&homs) {
        if !c.is_zero() {
            psi = psi.add(&f.scale(c));
        }
    }

    let mut components: Vec<usize> = (0..r).flat_map(|a| no.support(psi.row(a))).collect();
    components.sort_unstable();
    components.dedup();

    // A section of ψ ⊗ Q on ε_J·(O ⊗ Q): z with ψ(z) = ε_J and ε_J z = z.
    let mut eps = vec![BigRational::zero(); n];
    for &j in &components {
        for (e, c) in eps.iter_mut().zip(no.idempotent(j)) {
            *e += c;
        }
    }
    let psi_rows: Vec<Vec<BigRational>> = (0..r)
        .map(|a| psi.row(a).iter().map(|c| BigRational::from_integer(c.clone())).collect())
        .collect();
    let z0 = solve_rational(&psi_rows, &eps)
        .ok_or_else(|| ModuleError::Internal("ε_J not in the image of ψ".into()))?;
    let mut z = vec![BigRational::zero(); r];
    for (ek, ak) in eps.iter().zip(module.action()) {
        if ek.is_zero() {
            continue;
        }
        for (b, zb) in z.iter_mut().enumerate() {
            for (a, z0a) in z0.iter().enumerate() {
                let coef = ak.get(a, b);
                if !coef.is_zero() {
                    *zb += ek * z0a * BigRational::from_integer(coef.clone());
                }
            }
        }
    }
    let denom = common_denominator(&z);
    let mut y1: Vec<BigInt> = z
        .iter()
        .map(|q| (q * BigRational::from_integer(denom.clone())).to_integer())
        .collect();
    y1.resize(mdim, BigInt::zero());
    if module.span_has_torsion(&y1) {
        y1 = module.scale(&module.torsion_exponent(), &y1);
    }

    let psi_free = IntMatrix::from_rows((0..r).map(|a| psi.row(a).to_vec()).collect(), n);
    let ker = left_kernel(&psi_free);
    let candidates: Vec<Vec<BigInt>> = ker
        .row_vecs()
        .into_iter()
        .map(|mut v| {
            v.resize(mdim, BigInt::zero());
            v
        })
        .collect();
    let elements = extend_prebasis(module, vec![y1], &candidates, r)?;
    let prebasis = complete_prebasis(module, elements)?;

    let image_m: Vec<Vec<BigInt>> = m_lattice
        .basis_vectors()
        .iter()
        .map(|v| prebasis.psi_apply(0, v))
        .collect();
    let image_m = Lattice::from_vectors(n, &image_m);
    let target = prebasis.psi_apply(0, x);
    let mut witness = None;
    let mut pk = BigInt::one();
    for a in 0..=WITNESS_SEARCH_LIMIT {
        if !image_m.sum(&Lattice::scaled_full(n, &pk)).contains(&target) {
            witness = Some(a);
            break;
        }
        pk *= &pb;
    }
    let witness_exponent =
        witness.ok_or_else(|| ModuleError::Internal("no separating exponent found".into()))?;
    Ok(AdaptedPreBasis {
        prebasis,
        witness_exponent,
        obstruction_index: i0,
        components,
        scaling,
    })
}

/// Indices `i` of the primes above `p` with `rank_Z((O ∩ Õ_{μ(i)})·y) > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexSet {
    pub p: u64,
    pub indices: Vec<usize>,
}

pub fn index_set(module: &OModule, p: u64, y: &[BigInt]) -> Result<IndexSet, ModuleError> {
    let no = module.order();
    let primes = no.primes_over(p)?;
    let r = module.free_rank();
    if r == 0 {
        return Ok(IndexSet { p, indices: Vec::new() });
    }
    let ranks: Vec<bool> = (0..no.components().len())
        .map(|j| {
            let images: Vec<Vec<BigInt>> = no
                .component_intersection(j)
                .basis_vectors()
                .iter()
                .map(|beta| module.act(beta, y)[..r].to_vec())
                .collect();
            Lattice::from_vectors(r, &images).rank() > 0
        })
        .collect();
    Ok(IndexSet {
        p,
        indices: primes
            .iter()
            .enumerate()
            .filter(|(_, pr)| ranks[pr.component_index])
            .map(|(i, _)| i)
            .collect(),
    })
}
