use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::algebra::Order;
use super::normalization::{NormalizedOrder, NumberFieldComponent};
use super::poly::{factor_mod_p, FpPoly};
use super::OrderError;
use crate::lattice::{lattice_index, solve_integer, Lattice, LatticeIndex};

/// A prime `𝔭̃ = (p, g(θ))` of one component `Õ_j`.
#[derive(Clone, Debug, Serialize)]
pub struct PrimeIdealData {
    pub component_index: usize,
    pub p: u64,
    pub e: u32,
    pub f: usize,
    /// Reduction of `g` modulo `p`, lowest degree first.
    pub residue_poly: Vec<u64>,
    /// The ideal inside `Õ_j`, in ring-basis coordinates of that component.
    pub generators: Lattice,
}

/// Kummer–Dedekind factorization of `p Õ_j`.
pub fn factor_prime(
    component: &NumberFieldComponent,
    component_index: usize,
    p: u64,
) -> Result<Vec<PrimeIdealData>, OrderError> {
    let pb = BigInt::from(p);
    if component.index().is_multiple_of(&pb) {
        return Err(OrderError::IndexDivisible {
            p,
            index: component.index().clone(),
        });
    }
    let order = component.order();
    let p_unit = order.scalar(&pb);
    let factors = factor_mod_p(&FpPoly::from_integer_poly(component.defining_poly(), p));
    Ok(factors
        .into_iter()
        .map(|(g, e)| {
            let lifted: Vec<BigInt> = g.coeffs.iter().map(|&c| BigInt::from(c)).collect();
            let g_theta = component.poly_element(&lifted);
            PrimeIdealData {
                component_index,
                p,
                e,
                f: g.degree().expect("nonconstant factor"),
                residue_poly: g.coeffs.clone(),
                generators: order.ideal_from_generators(&[p_unit.clone(), g_theta]),
            }
        })
        .collect())
}

/// A full-rank ideal of `O`, as a lattice in `O`-coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealLattice {
    pub basis: Lattice,
}

impl IdealLattice {
    pub fn unit(rank: usize) -> Self {
        IdealLattice {
            basis: Lattice::full(rank),
        }
    }

    pub fn scalar(rank: usize, k: &BigInt) -> Self {
        IdealLattice {
            basis: Lattice::scaled_full(rank, k),
        }
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.basis.contains(x)
    }

    pub fn is_subset_of(&self, other: &IdealLattice) -> bool {
        self.basis.is_sublattice_of(&other.basis)
    }

    pub fn sum(&self, other: &IdealLattice) -> IdealLattice {
        IdealLattice {
            basis: self.basis.sum(&other.basis),
        }
    }

    pub fn intersection(&self, other: &IdealLattice) -> IdealLattice {
        IdealLattice {
            basis: self.basis.intersection(&other.basis),
        }
    }

    pub fn product(&self, other: &IdealLattice, order: &Order) -> IdealLattice {
        IdealLattice {
            basis: order.ideal_product(&self.basis, &other.basis),
        }
    }

    pub fn is_ideal_of(&self, order: &Order) -> bool {
        order.is_ideal(&self.basis)
    }

    /// `[O : I]`
    pub fn index(&self) -> LatticeIndex {
        lattice_index(&self.basis, &Lattice::full(self.basis.ambient_rank()))
            .expect("ideal lies in the order")
    }

    /// `k O ⊆ I`
    pub fn contains_scalar_multiple(&self, k: &BigInt) -> bool {
        let n = self.basis.ambient_rank();
        (0..n).all(|i| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = k.clone();
            self.contains(&v)
        })
    }

    /// `I ⊆ k O`
    pub fn is_inside_scalar_multiple(&self, k: &BigInt) -> bool {
        self.basis.basis().entries().iter().all(|e| e.is_multiple_of(k))
    }
}

/// Pass/fail of every inclusion in the three chains at a fixed `(p, n)`.
#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub p: u64,
    pub n: u32,
    #[serde(with = "crate::serde_int::bigint")]
    pub c: BigInt,
    pub d: u32,
    pub g: usize,
    /// `c^{g-1} p^{d(g-1)} O ⊆ 𝔭_i + ∏_{j≠i} 𝔭_j`, one entry per `i`.
    pub partition: Vec<bool>,
    /// `p^n O ⊆ ∩ 𝔭_i`
    pub intersection_lower: bool,
    /// `∩ 𝔭_i ⊆ p^{n-d} O`
    pub intersection_upper: bool,
    /// `c^{dg} p^{n+dg} O ⊆ ∏ 𝔭_i`
    pub product_lower: bool,
    /// `∏ 𝔭_i ⊆ p^{n-d} O`
    pub product_upper: bool,
}

impl InclusionReport {
    pub fn all_pass(&self) -> bool {
        self.partition.iter().all(|&b| b)
            && self.intersection_lower
            && self.intersection_upper
            && self.product_lower
            && self.product_upper
    }
}

/// `(a, b)` with `a ∈ 𝔭_{i,n}`, `b ∈ ∏_{j≠i} 𝔭_{j,n}` and `a + b = c^{g-1}p^{d(g-1)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionPair {
    #[serde(with = "crate::serde_int::bigint_vec")]
    pub a: Vec<BigInt>,
    #[serde(with = "crate::serde_int::bigint_vec")]
    pub b: Vec<BigInt>,
}

impl NormalizedOrder {
    /// All primes of `Õ` above `p`, indexed globally across components.
    pub fn primes_over(&self, p: u64) -> Result<Vec<PrimeIdealData>, OrderError> {
        let mut out = Vec::new();
        for (j, comp) in self.components().iter().enumerate() {
            out.extend(factor_prime(comp, j, p)?);
        }
        Ok(out)
    }

    /// `𝔭̃^{e n} ∩ O`.
    pub fn contracted_ideal(&self, prime: &PrimeIdealData, n: u32) -> IdealLattice {
        let comp = &self.components()[prime.component_index];
        let power = comp.order().ideal_power(&prime.generators, prime.e * n);
        let extended = self.extend_by_full(prime.component_index, &power);
        IdealLattice {
            basis: self.pullback_lattice(&extended),
        }
    }

    pub fn contracted_ideals(&self, p: u64, n: u32) -> Result<Vec<IdealLattice>, OrderError> {
        Ok(self
            .primes_over(p)?
            .iter()
            .map(|pr| self.contracted_ideal(pr, n))
            .collect())
    }

    /// `∏_{j≠i} ideals[j]`, the empty product being `O`.
    pub fn product_except(&self, ideals: &[IdealLattice], i: usize) -> IdealLattice {
        ideals
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(IdealLattice::unit(self.rank()), |acc, (_, id)| {
                acc.product(id, self.order())
            })
    }

    pub fn verify_inclusions(&self, p: u64, n: u32) -> Result<InclusionReport, OrderError> {
        let ex = self.exponent_decomposition(p);
        if n < ex.d {
            return Err(OrderError::Precondition(format!(
                "n = {n} is below the exponent d = {}",
                ex.d
            )));
        }
        let ideals = self.contracted_ideals(p, n)?;
        let g = ideals.len();
        let pb = BigInt::from(p);
        let c = &ex.c;
        let d = ex.d;
        let gu = g as u32;
        let part_scalar = c.pow(gu.saturating_sub(1)) * pb.pow(d * gu.saturating_sub(1));
        let partition = (0..g)
            .map(|i| {
                ideals[i]
                    .sum(&self.product_except(&ideals, i))
                    .contains_scalar_multiple(&part_scalar)
            })
            .collect();
        let rank = self.rank();
        let inter = ideals
            .iter()
            .fold(IdealLattice::unit(rank), |acc, id| acc.intersection(id));
        let prod = ideals
            .iter()
            .fold(IdealLattice::unit(rank), |acc, id| acc.product(id, self.order()));
        let upper = pb.pow(n - d);
        Ok(InclusionReport {
            p,
            n,
            c: c.clone(),
            d,
            g,
            partition,
            intersection_lower: inter.contains_scalar_multiple(&pb.pow(n)),
            intersection_upper: inter.is_inside_scalar_multiple(&upper),
            product_lower: prod.contains_scalar_multiple(&(c.pow(d * gu) * pb.pow(n + d * gu))),
            product_upper: prod.is_inside_scalar_multiple(&upper),
        })
    }

    pub fn partition_elements(&self, p: u64, n: u32) -> Result<Vec<PartitionPair>, OrderError> {
        let ideals = self.contracted_ideals(p, n)?;
        let g = ideals.len();
        if g == 1 {
            return Ok(vec![PartitionPair {
                a: self.order().zero(),
                b: self.order().unity().to_vec(),
            }]);
        }
        let ex = self.exponent_decomposition(p);
        let gu = g as u32 - 1;
        let s = ex.c.pow(gu) * BigInt::from(p).pow(ex.d * gu);
        let target = self.order().scalar(&s);
        (0..g)
            .map(|i| {
                let rest = self.product_except(&ideals, i);
                let a_basis = ideals[i].basis.basis();
                let stacked = a_basis.vstack(rest.basis.basis());
                let x = solve_integer(&stacked.transpose(), &target)
                    .ok_or(OrderError::NoSolution { index: i })?;
                let k = a_basis.rows();
                let a = a_basis.left_mul_vec(&x[..k]);
                let b = rest.basis.basis().left_mul_vec(&x[k..]);
                Ok(PartitionPair { a, b })
            })
            .collect()
    }
}

/// `p Õ_j` inside `Õ_j`, for checking `∏ 𝔭̃^e = p Õ_j`.
pub fn prime_product_check(component: &NumberFieldComponent, primes: &[PrimeIdealData]) -> bool {
    let order = component.order();
    let p = BigInt::from(primes.first().map_or(1, |pr| pr.p));
    let prod = primes.iter().fold(Lattice::full(order.rank()), |acc, pr| {
        order.ideal_product(&acc, &order.ideal_power(&pr.generators, pr.e))
    });
    prod == order.scalar_ideal(&p)
}
