use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, Mode};
use super::ExperimentError;
use crate::elliptic::{
    factorize, group_structure, primes_in, CurveFp, CurveQ, FormalPoint, MWPresentation, PointFp,
};
use crate::lattice::{membership_localized, snf, IntMatrix, Lattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeStatus {
    Good,
    Bad,
    /// `p ≤ 3`, outside short Weierstrass reduction.
    Skipped,
}

pub fn classify(curve: &CurveQ, p: u64) -> PrimeStatus {
    if p <= 3 {
        PrimeStatus::Skipped
    } else if (curve.discriminant() % BigInt::from(p)).is_zero() {
        PrimeStatus::Bad
    } else {
        PrimeStatus::Good
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Consistent,
    Inconclusive,
    /// The lattice places `x` in `Σ + E(Q)_tors` yet some reduction does not;
    /// impossible for a homomorphism, so it signals a defect.
    Contradiction,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Consistent => 0,
            Verdict::Inconclusive => 2,
            Verdict::Contradiction => 1,
        }
    }
}

/// Exact answer on coefficient vectors.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeVerdict {
    pub statement: String,
    pub in_sigma_plus_torsion: bool,
    pub in_sigma_tensor_q: bool,
    /// Nonzero Smith invariants of the Σ coefficient matrix.
    #[serde(with = "crate::serde_int::bigint_vec")]
    pub elementary_divisors: Vec<BigInt>,
    /// Primes `ℓ` dividing an elementary divisor with `x ∉ Σ ⊗ Z_(ℓ)`. When
    /// `x ∉ Σ ⊗ Q` every prime fails and only these are listed.
    pub local_failures: Vec<u64>,
}

/// Torsion is absorbed: `x ∈ Σ + E(Q)_tors` exactly when the coefficient
/// vector of `x` lies in the span of those of `Σ`.
pub fn lattice_verdict(rank: usize, sigma: &[FormalPoint], x: &FormalPoint, sigma_contains_torsion: bool) -> LatticeVerdict {
    let rows: Vec<Vec<BigInt>> = sigma.iter().map(|s| s.coeffs.clone()).collect();
    let m = IntMatrix::from_rows(rows, rank);
    let lattice = Lattice::from_generators(rank, &m);
    let divisors: Vec<BigInt> = if sigma.is_empty() {
        Vec::new()
    } else {
        snf(&m).invariants().into_iter().filter(|d| !d.is_zero()).collect()
    };
    let with_x = lattice.sum(&Lattice::from_vectors(rank, std::slice::from_ref(&x.coeffs)));
    let mut ells: Vec<u64> = divisors
        .iter()
        .flat_map(|d| factorize(d.to_u64().expect("elementary divisor fits u64")))
        .map(|(l, _)| l)
        .collect();
    ells.sort_unstable();
    ells.dedup();
    let local_failures = ells
        .into_iter()
        .filter(|&l| !membership_localized(&x.coeffs, &lattice, &BigInt::from(1), &BigInt::from(l)))
        .collect();
    let statement = if sigma_contains_torsion {
        "x in Sigma (Sigma declared to contain E(Q)_tors)"
    } else {
        "x in Sigma + E(Q)_tors"
    };
    LatticeVerdict {
        statement: statement.into(),
        in_sigma_plus_torsion: lattice.contains(&x.coeffs),
        in_sigma_tensor_q: with_x.rank() == lattice.rank(),
        elementary_divisors: divisors,
        local_failures,
    }
}

/// Reductions of the generators and torsion points at one good prime.
struct Reduced {
    curve: CurveFp,
    gens: Vec<PointFp>,
    torsion: Vec<PointFp>,
}

impl Reduced {
    fn new(mw: &MWPresentation, p: u64) -> Result<Self, ExperimentError> {
        let curve = CurveFp::new(mw.curve(), p)?;
        let gens = mw.generators().iter().map(|g| curve.reduce_point(g)).collect();
        let torsion = mw.torsion_points().iter().map(|t| curve.reduce_point(t)).collect();
        Ok(Reduced { curve, gens, torsion })
    }

    /// `red(Σ c_i P_i + T) = Σ c_i red(P_i) + red(T)`.
    fn formal(&self, f: &FormalPoint) -> PointFp {
        let mut acc = self.torsion[f.torsion_index];
        for (c, g) in f.coeffs.iter().zip(&self.gens) {
            acc = self.curve.add(&acc, &self.curve.mul_big(c, g));
        }
        acc
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GajdaPrime {
    pub record: &'static str,
    pub p: u64,
    pub status: PrimeStatus,
    pub good_reduction: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub member: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d2: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StatusCounts {
    pub good: usize,
    pub bad: usize,
    pub skipped: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GajdaSummary {
    pub record: &'static str,
    pub mode: Mode,
    pub prime_min: u64,
    pub prime_max: u64,
    pub seed: u64,
    pub counts: StatusCounts,
    pub bad_primes: Vec<u64>,
    pub witnesses: Vec<u64>,
    pub smallest_witness: Option<u64>,
    pub lattice_verdict: LatticeVerdict,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub per_prime: Vec<GajdaPrime>,
    pub summary: GajdaSummary,
}

fn gajda_prime(cfg: &ExperimentConfig, mw: &MWPresentation, p: u64) -> GajdaPrime {
    let status = classify(mw.curve(), p);
    let mut rec = GajdaPrime {
        record: "prime",
        p,
        status,
        good_reduction: status == PrimeStatus::Good,
        member: None,
        order_n: None,
        d1: None,
        d2: None,
        error: None,
    };
    if status != PrimeStatus::Good {
        return rec;
    }
    let run = || -> Result<(bool, u64, u64, u64), ExperimentError> {
        let red = Reduced::new(mw, p)?;
        let gs = group_structure(&red.curve, cfg.seed)?;
        // Torsion always joins Σ here, so membership matches the lattice
        // statement and a homomorphism can never contradict it.
        let mut sigma: Vec<PointFp> = cfg.sigma_generators.iter().map(|s| red.formal(s)).collect();
        sigma.extend(red.torsion.iter().copied());
        let x = red.formal(cfg.x.as_ref().expect("validated"));
        Ok((gs.subgroup_membership(&x, &sigma), gs.order_n, gs.d1, gs.d2))
    };
    match run() {
        Ok((member, n, d1, d2)) => {
            rec.member = Some(member);
            rec.order_n = Some(n);
            rec.d1 = Some(d1);
            rec.d2 = Some(d2);
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

fn counts<T>(recs: &[T], status: impl Fn(&T) -> PrimeStatus, error: impl Fn(&T) -> bool) -> StatusCounts {
    StatusCounts {
        good: recs.iter().filter(|r| status(r) == PrimeStatus::Good).count(),
        bad: recs.iter().filter(|r| status(r) == PrimeStatus::Bad).count(),
        skipped: recs.iter().filter(|r| status(r) == PrimeStatus::Skipped).count(),
        errors: recs.iter().filter(|r| error(r)).count(),
    }
}

/// Reduce `x` and `Σ` at every prime of the window and compare with the exact
/// lattice answer. Runs on the current rayon pool; output is ordered by prime.
pub fn run_gajda_scan(cfg: &ExperimentConfig) -> Result<ScanReport, ExperimentError> {
    cfg.validate()?;
    let mw = cfg.presentation()?;
    let x = cfg.x.as_ref().expect("validated");
    let per_prime: Vec<GajdaPrime> = primes_in(cfg.prime_min, cfg.prime_max)
        .par_iter()
        .map(|&p| gajda_prime(cfg, &mw, p))
        .collect();
    let lv = lattice_verdict(mw.rank(), &cfg.sigma_generators, x, cfg.sigma_contains_torsion);
    let witnesses: Vec<u64> = per_prime.iter().filter(|r| r.member == Some(false)).map(|r| r.p).collect();
    let (verdict, diagnostic) = match (lv.in_sigma_plus_torsion, witnesses.is_empty()) {
        (true, true) | (false, false) => (Verdict::Consistent, None),
        (false, true) => (Verdict::Inconclusive, None),
        (true, false) => (
            Verdict::Contradiction,
            Some(format!(
                "x lies in Sigma + E(Q)_tors but its reduction leaves red(Sigma) at p = {}; reduction is a homomorphism, so this is a defect",
                witnesses[0]
            )),
        ),
    };
    let summary = GajdaSummary {
        record: "summary",
        mode: Mode::Gajda,
        prime_min: cfg.prime_min,
        prime_max: cfg.prime_max,
        seed: cfg.seed,
        counts: counts(&per_prime, |r| r.status, |r| r.error.is_some()),
        bad_primes: per_prime.iter().filter(|r| r.status == PrimeStatus::Bad).map(|r| r.p).collect(),
        smallest_witness: witnesses.first().copied(),
        witnesses,
        lattice_verdict: lv,
        verdict,
        diagnostic,
    };
    Ok(ScanReport { per_prime, summary })
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportPrime {
    pub record: &'static str,
    pub p: u64,
    pub status: PrimeStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_x: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_y: Option<u64>,
    /// `ord(red x) | ord(red y)`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divides: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportSummary {
    pub record: &'static str,
    pub mode: Mode,
    pub prime_min: u64,
    pub prime_max: u64,
    pub seed: u64,
    pub counts: StatusCounts,
    pub failures: Vec<u64>,
    pub failure_count: usize,
    /// Failures over good primes with a result.
    pub failure_fraction: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportReport {
    pub per_prime: Vec<SupportPrime>,
    pub summary: SupportSummary,
}

fn support_prime(cfg: &ExperimentConfig, mw: &MWPresentation, p: u64) -> SupportPrime {
    let status = classify(mw.curve(), p);
    let mut rec = SupportPrime {
        record: "prime",
        p,
        status,
        order_x: None,
        order_y: None,
        divides: None,
        error: None,
    };
    if status != PrimeStatus::Good {
        return rec;
    }
    let run = || -> Result<(u64, u64), ExperimentError> {
        let red = Reduced::new(mw, p)?;
        let gs = group_structure(&red.curve, cfg.seed)?;
        let x = red.formal(cfg.x.as_ref().expect("validated"));
        let y = red.formal(cfg.y.as_ref().expect("validated"));
        Ok((gs.point_order(&x), gs.point_order(&y)))
    };
    match run() {
        Ok((ox, oy)) => {
            rec.order_x = Some(ox);
            rec.order_y = Some(oy);
            rec.divides = Some(oy % ox == 0);
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

/// Orders of `red x` and `red y` at every good prime of the window.
pub fn run_support_scan(cfg: &ExperimentConfig) -> Result<SupportReport, ExperimentError> {
    cfg.validate()?;
    let mw = cfg.presentation()?;
    let per_prime: Vec<SupportPrime> = primes_in(cfg.prime_min, cfg.prime_max)
        .par_iter()
        .map(|&p| support_prime(cfg, &mw, p))
        .collect();
    let failures: Vec<u64> = per_prime.iter().filter(|r| r.divides == Some(false)).map(|r| r.p).collect();
    let decided = per_prime.iter().filter(|r| r.divides.is_some()).count();
    let summary = SupportSummary {
        record: "summary",
        mode: Mode::Support,
        prime_min: cfg.prime_min,
        prime_max: cfg.prime_max,
        seed: cfg.seed,
        counts: counts(&per_prime, |r| r.status, |r| r.error.is_some()),
        failure_count: failures.len(),
        failure_fraction: if decided == 0 { 0.0 } else { failures.len() as f64 / decided as f64 },
        failures,
    };
    Ok(SupportReport { per_prime, summary })
}
