use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{ModuleError, OModule};
use crate::lattice::{IntMatrix, Lattice};
use crate::order::{IdealLattice, OrderError, PrimeIdealData};

/// Largest module the brute-force routines will enumerate.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

/// A module with no free part.
#[derive(Clone, Debug)]
pub struct FiniteOModule {
    module: OModule,
}

impl FiniteOModule {
    pub fn new(module: OModule) -> Result<Self, ModuleError> {
        if !module.is_finite() {
            return Err(ModuleError::NotFinite);
        }
        Ok(FiniteOModule { module })
    }

    pub fn module(&self) -> &OModule {
        &self.module
    }

    pub fn size(&self) -> BigInt {
        self.module.torsion_order()
    }

    /// Least positive integer killing every element.
    pub fn annihilator(&self) -> BigInt {
        self.module.torsion_exponent()
    }

    /// All elements in canonical form, last coordinate varying slowest.
    pub fn elements(&self) -> Result<Vec<Vec<BigInt>>, ModuleError> {
        let size = self.size();
        let count = size
            .to_u64()
            .filter(|&c| c <= ENUMERATION_LIMIT)
            .ok_or(ModuleError::TooLarge(size))?;
        let orders: Vec<u64> = self
            .module
            .torsion()
            .iter()
            .map(|t| t.to_u64().expect("small torsion order"))
            .collect();
        Ok((0..count)
            .map(|mut idx| {
                orders
                    .iter()
                    .map(|&t| {
                        let c = idx % t;
                        idx /= t;
                        BigInt::from(c)
                    })
                    .collect()
            })
            .collect())
    }

    /// Whether every element of the ideal kills `t`.
    pub fn killed_by(&self, ideal: &Lattice, t: &[BigInt]) -> bool {
        ideal
            .basis_vectors()
            .iter()
            .all(|beta| self.module.is_zero(&self.module.act(beta, t)))
    }
}

/// Outcome of checking `φ_n`, `ψ_n` and both composites elementwise.
#[derive(Clone, Debug, Serialize)]
pub struct CrtReport {
    pub p: u64,
    pub n: u32,
    #[serde(with = "crate::serde_int::bigint")]
    pub c: BigInt,
    pub d: u32,
    pub g: usize,
    /// `c^{g-1} p^{dg}`
    #[serde(with = "crate::serde_int::bigint")]
    pub scalar: BigInt,
    /// The elements `b_{i,n}` defining `φ_n`.
    #[serde(with = "crate::serde_int::bigint_vecs")]
    pub b: Vec<Vec<BigInt>>,
    pub domain_size: usize,
    pub summand_sizes: Vec<usize>,
    pub tuples_checked: usize,
    pub phi_well_defined: bool,
    pub psi_well_defined: bool,
    pub phi_psi_is_scalar: bool,
    pub psi_phi_is_scalar: bool,
}

impl CrtReport {
    pub fn all_pass(&self) -> bool {
        self.phi_well_defined && self.psi_well_defined && self.phi_psi_is_scalar && self.psi_phi_is_scalar
    }
}

/// Direct-sum tuples are enumerated in full up to this many; beyond it the
/// composite is checked summand by summand, which suffices by additivity.
const TUPLE_LIMIT: usize = 200_000;

pub fn crt_maps(t: &FiniteOModule, p: u64, n: u32) -> Result<CrtReport, ModuleError> {
    let module = t.module();
    let no = module.order();
    let ex = no.exponent_decomposition(p);
    if n < ex.d {
        return Err(OrderError::Precondition(format!("n = {n} is below d = {}", ex.d)).into());
    }
    let ideals = no.contracted_ideals(p, n)?;
    let pairs = no.partition_elements(p, n)?;
    let g = ideals.len();
    let pb = BigInt::from(p);
    let scalar = ex.c.pow(g as u32 - 1) * pb.pow(ex.d * g as u32);
    let pd = pb.pow(ex.d);
    let domain_scalar = pb.pow(n - ex.d);

    let elements = t.elements()?;
    let domain: Vec<&Vec<BigInt>> = elements
        .iter()
        .filter(|x| module.is_zero(&module.scale(&domain_scalar, x)))
        .collect();
    let summands: Vec<Vec<&Vec<BigInt>>> = ideals
        .iter()
        .map(|id| elements.iter().filter(|x| t.killed_by(&id.basis, x)).collect())
        .collect();

    let b_mats: Vec<IntMatrix> = pairs.iter().map(|pr| module.action_matrix(&pr.b)).collect();
    let apply_b = |i: usize, x: &[BigInt]| module.reduce(&b_mats[i].left_mul_vec(x));
    let psi = |tuple: &[&Vec<BigInt>]| {
        let mut acc = vec![BigInt::zero(); module.dim()];
        for x in tuple {
            acc = module.add(&acc, x);
        }
        module.scale(&pd, &acc)
    };

    let phi_well_defined = domain
        .iter()
        .all(|x| (0..g).all(|i| t.killed_by(&ideals[i].basis, &apply_b(i, x))));
    let psi_well_defined = summands.iter().all(|s| {
        s.iter()
            .all(|x| module.is_zero(&module.scale(&domain_scalar, &module.scale(&pd, x))))
    });
    let psi_phi_is_scalar = domain.iter().all(|x| {
        let images: Vec<Vec<BigInt>> = (0..g).map(|i| apply_b(i, x)).collect();
        let refs: Vec<&Vec<BigInt>> = images.iter().collect();
        module.equal(&psi(&refs), &module.scale(&scalar, x))
    });

    let zero = vec![BigInt::zero(); module.dim()];
    let phi_psi_ok = |tuple: &[&Vec<BigInt>]| {
        let u = psi(tuple);
        (0..g).all(|j| module.equal(&apply_b(j, &u), &module.scale(&scalar, tuple[j])))
    };
    let total: usize = summands
        .iter()
        .map(Vec::len)
        .try_fold(1usize, |acc, s| acc.checked_mul(s))
        .unwrap_or(usize::MAX);
    let (phi_psi_is_scalar, tuples_checked) = if total <= TUPLE_LIMIT {
        let mut idx = vec![0usize; g];
        let mut ok = true;
        let mut count = 0;
        'outer: loop {
            let tuple: Vec<&Vec<BigInt>> = (0..g).map(|i| summands[i][idx[i]]).collect();
            ok &= phi_psi_ok(&tuple);
            count += 1;
            for i in 0..g {
                idx[i] += 1;
                if idx[i] < summands[i].len() {
                    continue 'outer;
                }
                idx[i] = 0;
            }
            break;
        }
        (ok, count)
    } else {
        let mut ok = true;
        let mut count = 0;
        for i in 0..g {
            for x in &summands[i] {
                let tuple: Vec<&Vec<BigInt>> =
                    (0..g).map(|j| if j == i { *x } else { &zero }).collect();
                ok &= phi_psi_ok(&tuple);
                count += 1;
            }
        }
        (ok, count)
    };

    Ok(CrtReport {
        p,
        n,
        c: ex.c,
        d: ex.d,
        g,
        scalar,
        b: pairs.into_iter().map(|pr| pr.b).collect(),
        domain_size: domain.len(),
        summand_sizes: summands.iter().map(Vec::len).collect(),
        tuples_checked,
        phi_well_defined,
        psi_well_defined,
        phi_psi_is_scalar,
        psi_phi_is_scalar,
    })
}

/// Result of testing the three hypotheses and the conclusion
/// `α·x ∉ p^{a+b+d} N`.
#[derive(Clone, Debug, Serialize)]
pub struct EvilVerdict {
    pub p: u64,
    pub i: usize,
    pub a: u32,
    pub b: u32,
    pub d: u32,
    /// `α ∉ 𝔭_{i,a}`, `x ∉ 𝔭_{i,b} N`, `N[p^{a+d}] ⊆ p^b N`.
    pub hypotheses: [bool; 3],
    /// Exact lattice test of the conclusion.
    pub conclusion: bool,
    /// Brute-force test of the conclusion, for finite modules small enough.
    pub oracle: Option<bool>,
}

impl EvilVerdict {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|&h| h)
    }

    pub fn failing_hypotheses(&self) -> Vec<u8> {
        (0..3u8).filter(|&k| !self.hypotheses[k as usize]).map(|k| k + 1).collect()
    }

    /// A counterexample would be all hypotheses holding with the conclusion
    /// failing under either test.
    pub fn is_counterexample(&self) -> bool {
        self.hypotheses_hold() && (!self.conclusion || self.oracle == Some(false))
    }
}

/// Precomputed ideals and multiples for repeated checks on one module and
/// prime. Exponents up to `max_exponent` are supported for `a` and `b`.
pub struct EvilContext<'m> {
    module: &'m OModule,
    p: u64,
    d: u32,
    max_exponent: u32,
    primes: Vec<PrimeIdealData>,
    /// `ideals[i][k] = 𝔭_{i,k}`
    ideals: Vec<Vec<IdealLattice>>,
    /// `ideal_modules[i][k] = 𝔭_{i,k} N`
    ideal_modules: Vec<Vec<Lattice>>,
    /// `p^k N`
    multiples: Vec<Lattice>,
    /// `{p^k y : y ∈ N}` by enumeration, for small finite modules.
    oracle_multiples: Option<Vec<HashSet<Vec<BigInt>>>>,
}

/// Finite modules up to this size get the enumeration oracle.
pub const ORACLE_LIMIT: u64 = 100_000;

impl<'m> EvilContext<'m> {
    pub fn new(module: &'m OModule, p: u64, max_exponent: u32) -> Result<Self, ModuleError> {
        let no = module.order();
        let d = no.exponent_decomposition(p).d;
        let primes = no.primes_over(p)?;
        let ideals: Vec<Vec<IdealLattice>> = primes
            .iter()
            .map(|pr| (0..=max_exponent).map(|k| no.contracted_ideal(pr, k)).collect())
            .collect();
        let ideal_modules = ideals
            .iter()
            .map(|row| row.iter().map(|id| module.ideal_times_module(&id.basis)).collect())
            .collect();
        let top = 2 * max_exponent + d;
        let pb = BigInt::from(p);
        let multiples = (0..=top)
            .map(|k| module.scalar_multiple_lattice(&pb.pow(k)))
            .collect();
        let oracle_multiples = if module.is_finite()
            && module.torsion_order().to_u64().is_some_and(|s| s <= ORACLE_LIMIT)
        {
            let fin = FiniteOModule::new(module.clone())?;
            let mut level: HashSet<Vec<BigInt>> = fin.elements()?.into_iter().collect();
            let mut sets = Vec::with_capacity(top as usize + 1);
            for _ in 0..=top {
                let next = level.iter().map(|y| module.scale(&pb, y)).collect();
                sets.push(std::mem::replace(&mut level, next));
            }
            Some(sets)
        } else {
            None
        };
        Ok(EvilContext {
            module,
            p,
            d,
            max_exponent,
            primes,
            ideals,
            ideal_modules,
            multiples,
            oracle_multiples,
        })
    }

    pub fn prime_count(&self) -> usize {
        self.primes.len()
    }

    pub fn primes(&self) -> &[PrimeIdealData] {
        &self.primes
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn ideal(&self, i: usize, k: u32) -> &IdealLattice {
        &self.ideals[i][k as usize]
    }

    /// Tests hypotheses and conclusion without failing on hypotheses.
    pub fn evaluate(&self, alpha: &[BigInt], x: &[BigInt], i: usize, a: u32, b: u32) -> EvilVerdict {
        assert!(a <= self.max_exponent && b <= self.max_exponent, "exponent out of range");
        let module = self.module;
        let h1 = !self.ideals[i][a as usize].contains(alpha);
        let h2 = !self.ideal_modules[i][b as usize].contains(x);
        let pb = BigInt::from(self.p);
        let torsion = module.kernel_of_scalar(&pb.pow(a + self.d));
        let h3 = torsion.is_sublattice_of(&self.multiples[b as usize]);
        let k = (a + b + self.d) as usize;
        let ax = module.act(alpha, x);
        let conclusion = !self.multiples[k].contains(&ax);
        let oracle = self
            .oracle_multiples
            .as_ref()
            .map(|sets| !sets[k].contains(&module.reduce(&ax)));
        EvilVerdict {
            p: self.p,
            i,
            a,
            b,
            d: self.d,
            hypotheses: [h1, h2, h3],
            conclusion,
            oracle,
        }
    }

    pub fn check(
        &self,
        alpha: &[BigInt],
        x: &[BigInt],
        i: usize,
        a: u32,
        b: u32,
    ) -> Result<EvilVerdict, ModuleError> {
        let v = self.evaluate(alpha, x, i, a, b);
        if v.hypotheses_hold() {
            Ok(v)
        } else {
            Err(ModuleError::HypothesisFailed(v.failing_hypotheses()))
        }
    }
}

/// One-shot form of [`EvilContext::check`].
pub fn evil_check(
    module: &OModule,
    p: u64,
    alpha: &[BigInt],
    x: &[BigInt],
    i: usize,
    a: u32,
    b: u32,
) -> Result<EvilVerdict, ModuleError> {
    EvilContext::new(module, p, a.max(b))?.check(alpha, x, i, a, b)
}
