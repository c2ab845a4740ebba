//! Config-driven runs: the reduction scan for subgroup membership, the
//! order-divisibility scan, and the algebra verification suites. Reports are
//! JSON lines, one record per prime or check and a trailing summary.

mod algebra;
mod config;
mod scan;

use std::fmt::Write as _;

pub use algebra::{run_algebra_suite, AlgebraReport, AlgebraSummary, CheckRecord, Outcome, Suite, SuiteVerdict};
pub use config::{
    AlgebraConfig, EvilGrid, ExperimentConfig, ModuleEntry, Mode, MwSection, OrderEntry, OrderSource,
    MAX_FORMAL_COEFF, MAX_PRIME,
};
pub use scan::{
    classify, lattice_verdict, run_gajda_scan, run_support_scan, GajdaPrime, GajdaSummary, LatticeVerdict,
    PrimeStatus, ScanReport, StatusCounts, SupportPrime, SupportReport, SupportSummary, Verdict,
};

use crate::elliptic::EllipticError;
use crate::order::OrderError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExperimentError {
    #[error("config: {0}")]
    Config(String),
    #[error("fixture: {0}")]
    Fixture(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// Exit codes: 0 consistent or passing, 2 inconclusive, 1 failure.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Clone, Debug)]
pub enum Report {
    Gajda(ScanReport),
    Support(SupportReport),
    Algebra(AlgebraReport),
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report, ExperimentError> {
    Ok(match cfg.mode {
        Mode::Gajda => Report::Gajda(run_gajda_scan(cfg)?),
        Mode::Support => Report::Support(run_support_scan(cfg)?),
        Mode::Algebra => Report::Algebra(run_algebra_suite(cfg)?),
    })
}

fn push_line<T: serde::Serialize>(out: &mut String, v: &T) {
    out.push_str(&serde_json::to_string(v).expect("report records serialize"));
    out.push('\n');
}

/// Shows at most this many detail rows in the human table.
const TABLE_ROWS: usize = 40;

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self {
            Report::Gajda(r) => r.summary.verdict.exit_code(),
            Report::Support(_) => EXIT_OK,
            Report::Algebra(r) => match r.summary.verdict {
                SuiteVerdict::Pass => EXIT_OK,
                SuiteVerdict::Fail => EXIT_FAILURE,
            },
        }
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Gajda(r) => {
                r.per_prime.iter().for_each(|p| push_line(&mut out, p));
                push_line(&mut out, &r.summary);
            }
            Report::Support(r) => {
                r.per_prime.iter().for_each(|p| push_line(&mut out, p));
                push_line(&mut out, &r.summary);
            }
            Report::Algebra(r) => {
                r.records.iter().for_each(|c| push_line(&mut out, c));
                push_line(&mut out, &r.summary);
            }
        }
        out
    }

    pub fn human_table(&self) -> String {
        let mut s = String::new();
        match self {
            Report::Gajda(r) => {
                let sm = &r.summary;
                let _ = writeln!(s, "{:>8}  {:>8}  {:>14}  member", "p", "#E(F_p)", "Z/d1 x Z/d2");
                for rec in r.per_prime.iter().filter(|p| p.member == Some(false)).take(TABLE_ROWS) {
                    let _ = writeln!(
                        s,
                        "{:>8}  {:>8}  {:>14}  no",
                        rec.p,
                        rec.order_n.unwrap_or(0),
                        format!("{} x {}", rec.d1.unwrap_or(0), rec.d2.unwrap_or(0))
                    );
                }
                if sm.witnesses.len() > TABLE_ROWS {
                    let _ = writeln!(s, "... {} more witnesses", sm.witnesses.len() - TABLE_ROWS);
                }
                let _ = writeln!(s, "primes in [{}, {}]: {} good, {} bad, {} skipped, {} errors",
                    sm.prime_min, sm.prime_max, sm.counts.good, sm.counts.bad, sm.counts.skipped, sm.counts.errors);
                let lv = &sm.lattice_verdict;
                let _ = writeln!(s, "lattice: {} -> {}", lv.statement, lv.in_sigma_plus_torsion);
                let _ = writeln!(s, "local failures: {:?}", lv.local_failures);
                let _ = writeln!(s, "witnesses: {}  smallest: {}", sm.witnesses.len(),
                    sm.smallest_witness.map_or("none".to_string(), |w| w.to_string()));
                let _ = writeln!(s, "verdict: {:?}", sm.verdict);
                if let Some(d) = &sm.diagnostic {
                    let _ = writeln!(s, "diagnostic: {d}");
                }
            }
            Report::Support(r) => {
                let sm = &r.summary;
                let _ = writeln!(s, "{:>8}  {:>10}  {:>10}", "p", "ord(x)", "ord(y)");
                for rec in r.per_prime.iter().filter(|p| p.divides == Some(false)).take(TABLE_ROWS) {
                    let _ = writeln!(s, "{:>8}  {:>10}  {:>10}", rec.p, rec.order_x.unwrap_or(0), rec.order_y.unwrap_or(0));
                }
                if sm.failure_count > TABLE_ROWS {
                    let _ = writeln!(s, "... {} more failures", sm.failure_count - TABLE_ROWS);
                }
                let _ = writeln!(s, "primes in [{}, {}]: {} good, {} bad, {} skipped",
                    sm.prime_min, sm.prime_max, sm.counts.good, sm.counts.bad, sm.counts.skipped);
                let _ = writeln!(s, "ord(x) does not divide ord(y) at {} primes ({:.4} of good primes)",
                    sm.failure_count, sm.failure_fraction);
            }
            Report::Algebra(r) => {
                let _ = writeln!(s, "{:<12} {:<28} {:>4} {:>3}  outcome", "suite", "target", "p", "n");
                for c in &r.records {
                    let _ = writeln!(
                        s,
                        "{:<12} {:<28} {:>4} {:>3}  {:?}",
                        format!("{:?}", c.suite).to_lowercase(),
                        c.target,
                        c.p.map_or("-".into(), |p| p.to_string()),
                        c.n.map_or("-".into(), |n| n.to_string()),
                        c.outcome
                    );
                }
                let sm = &r.summary;
                let _ = writeln!(s, "{} checks: {} passed, {} failed, {} unsupported -> {:?}",
                    sm.checks, sm.passed, sm.failed, sm.unsupported, sm.verdict);
            }
        }
        s
    }
}
