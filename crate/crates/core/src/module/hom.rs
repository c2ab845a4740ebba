use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{min_positive_coordinate, ModuleError, OModule};
use crate::lattice::{lattice_index, left_kernel, right_kernel, IntMatrix, Lattice, LatticeIndex};
use crate::order::FullMap;

/// Basis of `Hom_O(N, O)`. Each map is an `(r+s) × n` matrix `F` acting by
/// `x ↦ x · F`; torsion rows are zero since `O` is torsion-free.
pub fn hom_lattice(module: &OModule) -> Vec<IntMatrix> {
    let r = module.free_rank();
    let m = module.dim();
    let order = module.order().order();
    let n = order.rank();
    if r == 0 {
        return Vec::new();
    }
    let unknowns = r * n;
    let mut rows = Vec::new();
    for (k, a) in module.action().iter().enumerate() {
        let mk = order.mult_matrix(&order.basis_element(k));
        // (A_ff F - F M_k)[i][c] = 0
        for i in 0..r {
            for c in 0..n {
                let mut eq = vec![BigInt::zero(); unknowns];
                for b in 0..r {
                    let coef = a.get(i, b);
                    if !coef.is_zero() {
                        eq[b * n + c] += coef;
                    }
                }
                for d in 0..n {
                    let coef = mk.get(d, c);
                    if !coef.is_zero() {
                        eq[i * n + d] -= coef;
                    }
                }
                rows.push(eq);
            }
        }
    }
    let system = IntMatrix::from_rows(rows, unknowns);
    let kernel = right_kernel(&system);
    (0..kernel.rows())
        .map(|l| {
            let mut f = IntMatrix::zeros(m, n);
            for i in 0..r {
                for c in 0..n {
                    f.set(i, c, kernel.get(l, i * n + c).clone());
                }
            }
            f
        })
        .collect()
}

/// `x ↦ t(x·F)` as a vector `w` with `x ↦ x · w` on the free part.
pub(crate) fn compose_with_full_map(f: &IntMatrix, t: &FullMap, r: usize) -> Vec<BigInt> {
    (0..r).map(|i| t.apply(f.row(i))).collect()
}

/// Index of `{t∘f : f ∈ Hom_O(N, O)}` in `Hom_Z(N, Z)`.
pub fn full_map_cokernel_bound(module: &OModule, t: &FullMap) -> Result<BigInt, ModuleError> {
    let r = module.free_rank();
    if r == 0 {
        return Ok(BigInt::one());
    }
    let gens: Vec<Vec<BigInt>> = hom_lattice(module)
        .iter()
        .map(|f| compose_with_full_map(f, t, r))
        .collect();
    let image = Lattice::from_vectors(r, &gens);
    match lattice_index(&image, &Lattice::full(r)).expect("sublattice of Z^r") {
        LatticeIndex::Finite(k) => Ok(k),
        LatticeIndex::Infinite => Err(ModuleError::InfiniteCokernel),
    }
}

/// `η₀(y)` with an element `γ = ψ(y)` realizing it: `γ·y = η₀·y` and `γ`
/// kills every `α` with `α·y` torsion.
#[derive(Clone, Debug, Serialize)]
pub struct Eta0 {
    #[serde(with = "crate::serde_int::bigint")]
    pub value: BigInt,
    #[serde(with = "crate::serde_int::bigint_vec")]
    pub gamma: Vec<BigInt>,
}

pub fn eta0(module: &OModule, y: &[BigInt]) -> Result<Eta0, ModuleError> {
    if module.is_torsion(y) {
        return Err(ModuleError::TorsionElement);
    }
    let order = module.order().order();
    let n = order.rank();
    let r = module.free_rank();
    let m = module.dim();
    let s = module.torsion().len();
    let images: Vec<Vec<BigInt>> = module.action().iter().map(|a| a.left_mul_vec(y)).collect();
    let free_images = IntMatrix::from_rows(images.iter().map(|v| v[..r].to_vec()).collect(), r);
    let torsion_killers = left_kernel(&free_images);

    // Unknowns: γ (n), the scalar (1), slack for each torsion relation (s).
    let unknowns = n + 1 + s;
    let mut rows = Vec::new();
    for l in 0..torsion_killers.rows() {
        let ma = order.mult_matrix(torsion_killers.row(l));
        for c in 0..n {
            let mut eq = vec![BigInt::zero(); unknowns];
            for i in 0..n {
                eq[i] = ma.get(i, c).clone();
            }
            rows.push(eq);
        }
    }
    for c in 0..m {
        let mut eq = vec![BigInt::zero(); unknowns];
        for i in 0..n {
            eq[i] = images[i][c].clone();
        }
        eq[n] = -y[c].clone();
        if c >= r {
            eq[n + 1 + (c - r)] = -module.torsion()[c - r].clone();
        }
        rows.push(eq);
    }
    let kernel = right_kernel(&IntMatrix::from_rows(rows, unknowns));
    let (value, w) = min_positive_coordinate(&kernel, n)
        .ok_or_else(|| ModuleError::Internal("no splitting of O·y found".into()))?;
    Ok(Eta0 {
        value,
        gamma: w[..n].to_vec(),
    })
}
