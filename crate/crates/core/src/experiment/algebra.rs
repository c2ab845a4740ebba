use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{AlgebraConfig, ExperimentConfig, Mode};
use super::ExperimentError;
use crate::module::{
    crt_maps, prebasis_construct, EvilContext, FiniteOModule, ModuleError, OModule,
};
use crate::order::{NormalizedOrder, OrderError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Inclusions,
    Eta,
    Crt,
    Evil,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// The prime divides the index of a defining polynomial, outside the
    /// factorization method.
    Unsupported,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub record: &'static str,
    pub suite: Suite,
    pub target: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub outcome: Outcome,
    pub detail: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SuiteVerdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraSummary {
    pub record: &'static str,
    pub mode: Mode,
    pub seed: u64,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub unsupported: usize,
    pub verdict: SuiteVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraReport {
    pub records: Vec<CheckRecord>,
    pub summary: AlgebraSummary,
}

enum Job {
    Inclusions { order: usize, p: u64, n: u32 },
    Eta { module: usize },
    Crt { module: usize, p: u64, n: u32 },
    Evil { module: usize, p: u64 },
}

struct Loaded {
    orders: Vec<(String, Arc<NormalizedOrder>)>,
    modules: Vec<(String, OModule)>,
}

fn load(cfg: &ExperimentConfig, alg: &AlgebraConfig) -> Result<Loaded, ExperimentError> {
    let mut orders = Vec::new();
    let mut by_name = HashMap::new();
    for entry in &alg.orders {
        let o = Arc::new(entry.load(cfg).map_err(|e| match e {
            ExperimentError::Order(inner) => ExperimentError::Fixture(format!("order {:?}: {inner}", entry.name)),
            other => other,
        })?);
        by_name.insert(entry.name.clone(), o.clone());
        orders.push((entry.name.clone(), o));
    }
    let mut modules = Vec::new();
    for entry in &alg.modules {
        let o = by_name
            .get(&entry.order)
            .ok_or_else(|| ExperimentError::Config(format!("module {:?} names unknown order {:?}", entry.name, entry.order)))?;
        let m = entry
            .module
            .build(o)
            .map_err(|e| ExperimentError::Fixture(format!("module {:?}: {e}", entry.name)))?;
        modules.push((entry.name.clone(), m));
    }
    Ok(Loaded { orders, modules })
}

fn finite_size(m: &OModule, limit: u64) -> Option<u64> {
    if !m.is_finite() {
        return None;
    }
    let size = m.torsion_order();
    (size <= BigInt::from(limit)).then(|| u64::try_from(size).expect("bounded"))
}

fn unsupported(e: &OrderError) -> bool {
    matches!(e, OrderError::IndexDivisible { .. })
}

fn jobs(alg: &AlgebraConfig, loaded: &Loaded) -> Vec<Job> {
    let mut out = Vec::new();
    for (i, (_, o)) in loaded.orders.iter().enumerate() {
        for &p in &alg.primes {
            let d = o.exponent_decomposition(p).d;
            for n in d..=alg.max_n.max(d) {
                out.push(Job::Inclusions { order: i, p, n });
            }
        }
    }
    for (i, (_, m)) in loaded.modules.iter().enumerate() {
        out.push(Job::Eta { module: i });
        if finite_size(m, alg.evil.max_module_size).is_none() {
            continue;
        }
        for &p in &alg.primes {
            let d = m.order().exponent_decomposition(p).d;
            for n in d.max(1)..=alg.max_n.max(d.max(1)) {
                out.push(Job::Crt { module: i, p, n });
            }
            out.push(Job::Evil { module: i, p });
        }
    }
    out
}

fn record(suite: Suite, target: &str, p: Option<u64>, n: Option<u32>, outcome: Outcome, detail: Value) -> CheckRecord {
    CheckRecord {
        record: "check",
        suite,
        target: target.to_string(),
        p,
        n,
        outcome,
        detail,
    }
}

fn pass_or_fail(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn run_inclusions(name: &str, o: &NormalizedOrder, p: u64, n: u32) -> CheckRecord {
    match o.verify_inclusions(p, n) {
        Ok(rep) => record(
            Suite::Inclusions,
            name,
            Some(p),
            Some(n),
            pass_or_fail(rep.all_pass()),
            serde_json::to_value(&rep).expect("serializable"),
        ),
        Err(e) if unsupported(&e) => record(Suite::Inclusions, name, Some(p), Some(n), Outcome::Unsupported, json!(e.to_string())),
        Err(e) => record(Suite::Inclusions, name, Some(p), Some(n), Outcome::Fail, json!(e.to_string())),
    }
}

fn run_eta(name: &str, m: &OModule, samples: usize, seed: u64) -> CheckRecord {
    let pb = match prebasis_construct(m) {
        Ok(pb) => pb,
        Err(e) => return record(Suite::Eta, name, None, None, Outcome::Fail, json!(e.to_string())),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<Vec<BigInt>> = (0..m.dim()).map(|i| m.basis_element(i)).collect();
    for _ in 0..samples {
        let v: Vec<BigInt> = (0..m.dim()).map(|_| BigInt::from(rng.gen_range(-1000i64..=1000))).collect();
        xs.push(m.reduce(&v));
    }
    let failures = xs.iter().filter(|x| !pb.check_identity(m, x)).count();
    let product: BigInt = pb.eta0_values.iter().product::<BigInt>() * &pb.eta_prime;
    let ok = failures == 0 && product == pb.eta;
    record(
        Suite::Eta,
        name,
        None,
        None,
        pass_or_fail(ok),
        json!({
            "elements": pb.len(),
            "eta_prime": pb.eta_prime.to_string(),
            "eta0_values": pb.eta0_values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "eta": pb.eta.to_string(),
            "checked": xs.len(),
            "failures": failures,
        }),
    )
}

fn run_crt(name: &str, m: &OModule, p: u64, n: u32) -> CheckRecord {
    let res = FiniteOModule::new(m.clone()).and_then(|t| crt_maps(&t, p, n));
    match res {
        Ok(rep) => record(
            Suite::Crt,
            name,
            Some(p),
            Some(n),
            pass_or_fail(rep.all_pass()),
            json!({
                "g": rep.g,
                "c": rep.c.to_string(),
                "d": rep.d,
                "scalar": rep.scalar.to_string(),
                "domain_size": rep.domain_size,
                "summand_sizes": rep.summand_sizes,
                "tuples_checked": rep.tuples_checked,
                "phi_well_defined": rep.phi_well_defined,
                "psi_well_defined": rep.psi_well_defined,
                "phi_psi_is_scalar": rep.phi_psi_is_scalar,
                "psi_phi_is_scalar": rep.psi_phi_is_scalar,
            }),
        ),
        Err(ModuleError::Order(e)) if unsupported(&e) => {
            record(Suite::Crt, name, Some(p), Some(n), Outcome::Unsupported, json!(e.to_string()))
        }
        Err(e) => record(Suite::Crt, name, Some(p), Some(n), Outcome::Fail, json!(e.to_string())),
    }
}

fn box_vectors(n: usize, bound: i64) -> Vec<Vec<BigInt>> {
    let side = (2 * bound + 1) as usize;
    (0..side.pow(n as u32))
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let d = (idx % side) as i64 - bound;
                    idx /= side;
                    BigInt::from(d)
                })
                .collect()
        })
        .collect()
}

#[derive(Default)]
struct EvilTally {
    evaluations: usize,
    hypotheses_held: usize,
    oracle_checked: usize,
    oracle_disagreements: usize,
    counterexamples: Vec<Value>,
}

impl EvilTally {
    fn merge(mut self, other: EvilTally) -> EvilTally {
        self.evaluations += other.evaluations;
        self.hypotheses_held += other.hypotheses_held;
        self.oracle_checked += other.oracle_checked;
        self.oracle_disagreements += other.oracle_disagreements;
        self.counterexamples.extend(other.counterexamples);
        self
    }
}

fn run_evil(name: &str, m: &OModule, p: u64, alg: &AlgebraConfig) -> CheckRecord {
    let grid = &alg.evil;
    let ctx = match EvilContext::new(m, p, grid.max_exponent) {
        Ok(c) => c,
        Err(ModuleError::Order(e)) if unsupported(&e) => {
            return record(Suite::Evil, name, Some(p), None, Outcome::Unsupported, json!(e.to_string()))
        }
        Err(e) => return record(Suite::Evil, name, Some(p), None, Outcome::Fail, json!(e.to_string())),
    };
    let elements = match FiniteOModule::new(m.clone()).and_then(|t| t.elements()) {
        Ok(e) => e,
        Err(e) => return record(Suite::Evil, name, Some(p), None, Outcome::Fail, json!(e.to_string())),
    };
    let xs: Vec<Vec<BigInt>> = if elements.len() <= grid.x_limit {
        elements
    } else {
        let stride = elements.len().div_ceil(grid.x_limit);
        elements.into_iter().step_by(stride).collect()
    };
    let alphas = box_vectors(m.order().rank(), grid.alpha_bound);
    let tally = xs
        .par_iter()
        .map(|x| {
            let mut t = EvilTally::default();
            for i in 0..ctx.prime_count() {
                for a in 0..=grid.max_exponent {
                    for b in 0..=grid.max_exponent {
                        for alpha in &alphas {
                            let v = ctx.evaluate(alpha, x, i, a, b);
                            t.evaluations += 1;
                            if v.hypotheses_hold() {
                                t.hypotheses_held += 1;
                            }
                            if let Some(o) = v.oracle {
                                t.oracle_checked += 1;
                                if o != v.conclusion {
                                    t.oracle_disagreements += 1;
                                }
                            }
                            if v.is_counterexample() && t.counterexamples.len() < 5 {
                                t.counterexamples.push(serde_json::to_value(&v).expect("serializable"));
                            }
                        }
                    }
                }
            }
            t
        })
        .reduce(EvilTally::default, EvilTally::merge);
    let ok = tally.counterexamples.is_empty() && tally.oracle_disagreements == 0;
    record(
        Suite::Evil,
        name,
        Some(p),
        None,
        pass_or_fail(ok),
        json!({
            "primes": ctx.prime_count(),
            "d": ctx.d(),
            "x_count": xs.len(),
            "alpha_count": alphas.len(),
            "evaluations": tally.evaluations,
            "hypotheses_held": tally.hypotheses_held,
            "oracle_checked": tally.oracle_checked,
            "oracle_disagreements": tally.oracle_disagreements,
            "counterexamples": tally.counterexamples,
        }),
    )
}

/// Every inclusion, pre-basis, CRT and obstruction check over the configured
/// fixtures. Fixture errors abort; check failures are recorded.
pub fn run_algebra_suite(cfg: &ExperimentConfig) -> Result<AlgebraReport, ExperimentError> {
    cfg.validate()?;
    let alg = cfg.algebra.as_ref().expect("validated");
    let loaded = load(cfg, alg)?;
    let records: Vec<CheckRecord> = jobs(alg, &loaded)
        .par_iter()
        .map(|job| match *job {
            Job::Inclusions { order, p, n } => {
                let (name, o) = &loaded.orders[order];
                run_inclusions(name, o, p, n)
            }
            Job::Eta { module } => {
                let (name, m) = &loaded.modules[module];
                run_eta(name, m, alg.random_elements, cfg.seed ^ module as u64)
            }
            Job::Crt { module, p, n } => {
                let (name, m) = &loaded.modules[module];
                run_crt(name, m, p, n)
            }
            Job::Evil { module, p } => {
                let (name, m) = &loaded.modules[module];
                run_evil(name, m, p, alg)
            }
        })
        .collect();
    let count = |o: Outcome| records.iter().filter(|r| r.outcome == o).count();
    let failed = count(Outcome::Fail);
    let summary = AlgebraSummary {
        record: "summary",
        mode: Mode::Algebra,
        seed: cfg.seed,
        checks: records.len(),
        passed: count(Outcome::Pass),
        failed,
        unsupported: count(Outcome::Unsupported),
        verdict: if failed == 0 { SuiteVerdict::Pass } else { SuiteVerdict::Fail },
    };
    Ok(AlgebraReport { records, summary })
}
