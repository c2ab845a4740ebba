use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{ModuleError, OModule};
use crate::lattice::{IntMatrix, Lattice};
use crate::order::NormalizedOrder;
use crate::serde_int::IntRepr;

/// JSON shape of an explicit module presentation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<IntRepr>,
    /// One square matrix per basis element of the order.
    pub action: Vec<Vec<Vec<IntRepr>>>,
}

fn ints(v: &[IntRepr]) -> Result<Vec<BigInt>, ModuleError> {
    v.iter()
        .cloned()
        .map(BigInt::try_from)
        .collect::<Result<_, _>>()
        .map_err(ModuleError::Shape)
}

impl ModuleSpec {
    pub fn build(&self, order: Arc<NormalizedOrder>) -> Result<OModule, ModuleError> {
        let m = self.free_rank + self.torsion.len();
        let action = self
            .action
            .iter()
            .map(|mat| {
                let rows = mat.iter().map(|r| ints(r)).collect::<Result<Vec<_>, _>>()?;
                if rows.len() != m || rows.iter().any(|r| r.len() != m) {
                    return Err(ModuleError::Shape(format!("action matrices must be {m}x{m}")));
                }
                Ok(IntMatrix::from_rows(rows, m))
            })
            .collect::<Result<Vec<_>, _>>()?;
        OModule::new(order, self.free_rank, ints(&self.torsion)?, action)
    }
}

impl From<&OModule> for ModuleSpec {
    fn from(m: &OModule) -> Self {
        ModuleSpec {
            free_rank: m.free_rank(),
            torsion: m.torsion().iter().map(IntRepr::from).collect(),
            action: m
                .action()
                .iter()
                .map(|a| {
                    a.row_vecs()
                        .iter()
                        .map(|r| r.iter().map(IntRepr::from).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

/// An ideal of the order, by generators or as a contracted prime power.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdealSource {
    Generators { generators: Vec<Vec<IntRepr>> },
    ContractedPrime { p: u64, prime_index: usize, n: u32 },
}

impl IdealSource {
    pub fn build(&self, order: &NormalizedOrder) -> Result<Lattice, ModuleError> {
        match self {
            IdealSource::Generators { generators } => {
                let gens = generators
                    .iter()
                    .map(|g| ints(g))
                    .collect::<Result<Vec<_>, _>>()?;
                if gens.iter().any(|g| g.len() != order.rank()) {
                    return Err(ModuleError::Shape("ideal generator has wrong length".into()));
                }
                Ok(order.order().ideal_from_generators(&gens))
            }
            IdealSource::ContractedPrime { p, prime_index, n } => {
                let primes = order.primes_over(*p)?;
                let pr = primes.get(*prime_index).ok_or_else(|| {
                    ModuleError::Shape(format!("only {} primes above {p}", primes.len()))
                })?;
                Ok(order.contracted_ideal(pr, *n).basis)
            }
        }
    }
}

/// How a module is obtained from the order.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleSource {
    Explicit(ModuleSpec),
    /// `O^k`
    Power { k: usize },
    /// An ideal of `O` as a module.
    Ideal { ideal: IdealSource },
    QuotientByScalar { base: Box<ModuleSource>, scalar: IntRepr },
    QuotientByIdeal { base: Box<ModuleSource>, ideal: IdealSource },
    DirectSum { parts: Vec<ModuleSource> },
}

impl ModuleSource {
    pub fn build(&self, order: &Arc<NormalizedOrder>) -> Result<OModule, ModuleError> {
        match self {
            ModuleSource::Explicit(spec) => spec.build(order.clone()),
            ModuleSource::Power { k } => Ok(OModule::free(order.clone(), *k)),
            ModuleSource::Ideal { ideal } => OModule::from_ideal(order.clone(), &ideal.build(order)?),
            ModuleSource::QuotientByScalar { base, scalar } => {
                let k = BigInt::try_from(scalar.clone()).map_err(ModuleError::Shape)?;
                base.build(order)?.quotient_by_scalar(&k)
            }
            ModuleSource::QuotientByIdeal { base, ideal } => {
                base.build(order)?.quotient_by_ideal(&ideal.build(order)?)
            }
            ModuleSource::DirectSum { parts } => {
                let mut iter = parts.iter();
                let first = iter
                    .next()
                    .ok_or_else(|| ModuleError::Shape("empty direct sum".into()))?
                    .build(order)?;
                iter.try_fold(first, |acc, p| Ok(acc.direct_sum(&p.build(order)?)))
            }
        }
    }
}
