//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines come out in order; exits nonzero if any criterion
//! fails.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use mwlocal_core::elliptic::{group_structure, primes_in, CurveFp, CurveQ, FormalPoint, PointFp, RationalPoint};
use mwlocal_core::experiment::{lattice_verdict, run, EvilGrid, ExperimentConfig, PrimeStatus, Report};
use mwlocal_core::lattice::{snf, IntMatrix, Lattice};
use mwlocal_core::module::{crt_maps, prebasis_construct, EvilContext, FiniteOModule, OModule};
use mwlocal_core::order::NormalizedOrder;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smallest good prime `p` with `red_p P1 ∉ red_p ⟨2P1, 2P2⟩` on
/// `y² = x³ + 17`. Frozen from the first full scan.
const SMALLEST_WITNESS: u64 = 11;

const SNF_MATRICES: usize = 1000;
const SNF_MAX_DIM: usize = 6;
const SNF_ENTRY_BOUND: i64 = 20;
const SNF_BUDGET: Duration = Duration::from_secs(30);
const INCLUSION_BUDGET: Duration = Duration::from_secs(60);
const ELLIPTIC_BUDGET: Duration = Duration::from_secs(120);
const SCAN_BUDGET: Duration = Duration::from_secs(120);
const MAX_N: u32 = 6;
const PRIMES: [u64; 3] = [2, 3, 5];
const RANDOM_ELEMENTS: usize = 100;
const FINITE_SIZE_LIMIT: u64 = 10_000;
const DLOG_SAMPLES: usize = 100;
const ELLIPTIC_PRIME_LIMIT: u64 = 1000;
const SCAN_PRIME_LIMIT: u64 = 10_000;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn load(name: &str) -> ExperimentConfig {
    ExperimentConfig::from_path(&configs().join(name)).expect("config loads")
}

fn criterion_1_smith() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20_241);
    let mut invariants = 0;
    for k in 0..SNF_MATRICES {
        let (r, c) = (rng.gen_range(1..=SNF_MAX_DIM), rng.gen_range(1..=SNF_MAX_DIM));
        let a = random_matrix(&mut rng, r, c, SNF_ENTRY_BOUND);
        let m = IntMatrix::from_i64(&a);
        let dec = snf(&m);
        ensure(det_oracle(&dec.u.row_vecs()).magnitude().is_one(), || format!("matrix {k}: U not unimodular"))?;
        ensure(det_oracle(&dec.v.row_vecs()).magnitude().is_one(), || format!("matrix {k}: V not unimodular"))?;
        ensure(dec.u.mul(&m).mul(&dec.v) == dec.d, || format!("matrix {k}: UAV != D"))?;
        let off_diagonal_zero =
            (0..r).all(|i| (0..c).all(|j| i == j || dec.d.get(i, j).is_zero()));
        ensure(off_diagonal_zero, || format!("matrix {k}: D not diagonal"))?;
        let oracle: Vec<BigInt> = smith_invariants_oracle(&a);
        ensure(dec.invariants() == oracle, || {
            format!("matrix {k} {a:?}: invariants {:?} vs minors {oracle:?}", dec.invariants())
        })?;
        invariants += oracle.len();
    }
    Ok(format!("{SNF_MATRICES} matrices, {invariants} invariants match the gcd-of-minors oracle"))
}

fn product(o: &NormalizedOrder, a: &Lattice, b: &Lattice) -> Lattice {
    let gens: Vec<Vec<BigInt>> = a
        .basis_vectors()
        .iter()
        .flat_map(|x| b.basis_vectors().into_iter().map(move |y| o.order().mul(x, &y)))
        .collect();
    Lattice::from_vectors(o.rank(), &gens)
}

fn contains_scalar(l: &Lattice, rank: usize, s: &BigInt) -> bool {
    (0..rank).all(|k| {
        let mut e = vec![BigInt::zero(); rank];
        e[k] = s.clone();
        l.contains(&e)
    })
}

fn inside_scalar(l: &Lattice, s: &BigInt) -> bool {
    l.basis_vectors().iter().flatten().all(|x| (x % s).is_zero())
}

fn criterion_2_inclusions() -> Check {
    let mut cases = 0;
    for name in ["Z", "ZxZ", "Z[i]", "Z[sqrt-3]", "Z[2i]"] {
        let o = order(name);
        let r = o.rank();
        for p in PRIMES {
            let ex = o.exponent_decomposition(p);
            let (c, d) = (ex.c.clone(), ex.d);
            let pb = BigInt::from(p);
            let primes = o.primes_over(p).map_err(|e| format!("{name} p={p}: {e}"))?;
            let g = primes.len() as u32;
            for n in d.max(1)..=MAX_N {
                let ideals: Vec<Lattice> = primes.iter().map(|pr| o.contracted_ideal(pr, n).basis).collect();
                let tag = || format!("{name} p={p} n={n}");
                for (i, (id, pr)) in ideals.iter().zip(&primes).enumerate() {
                    ensure(o.order().is_ideal(id), || format!("{}: 𝔭_{i} not an ideal", tag()))?;
                    if d == 0 {
                        // Locally maximal: the index is the norm p^{f e n}.
                        let norm = pb.pow(pr.f as u32 * pr.e * n);
                        let idx = mwlocal_core::lattice::lattice_index(id, &Lattice::full(r)).unwrap();
                        ensure(idx.finite() == Some(&norm), || format!("{}: index of 𝔭_{i} is {idx}", tag()))?;
                    }
                }
                let part = c.pow(g - 1) * pb.pow(d * (g - 1));
                for i in 0..ideals.len() {
                    let rest = ideals
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .fold(Lattice::full(r), |acc, (_, id)| product(&o, &acc, id));
                    ensure(contains_scalar(&ideals[i].sum(&rest), r, &part), || {
                        format!("{}: partition inclusion fails at i={i}", tag())
                    })?;
                }
                let inter = ideals.iter().fold(Lattice::full(r), |acc, id| acc.intersection(id));
                let upper = pb.pow(n - d);
                ensure(contains_scalar(&inter, r, &pb.pow(n)), || format!("{}: p^n O not in ∩", tag()))?;
                ensure(inside_scalar(&inter, &upper), || format!("{}: ∩ not in p^(n-d) O", tag()))?;
                let prod = ideals.iter().fold(Lattice::full(r), |acc, id| product(&o, &acc, id));
                let lower = c.pow(d * g) * pb.pow(n + d * g);
                ensure(contains_scalar(&prod, r, &lower), || format!("{}: product lower bound fails", tag()))?;
                ensure(inside_scalar(&prod, &upper), || format!("{}: ∏ not in p^(n-d) O", tag()))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (order, p, n) cases, all three inclusion chains hold"))
}

fn criterion_3_eta() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut checked = 0;
    let modules = fixture_modules();
    for (name, module) in &modules {
        let pb = prebasis_construct(module).map_err(|e| format!("{name}: {e}"))?;
        let mut xs: Vec<Vec<BigInt>> = (0..module.dim()).map(|i| module.basis_element(i)).collect();
        xs.extend((0..RANDOM_ELEMENTS).map(|_| random_element(module, &mut rng, 50)));
        for x in xs {
            let mut acc = module.scale(&pb.eta, &x);
            for (psi, y) in pb.psi.iter().zip(&pb.elements) {
                let term = module.act(&psi.left_mul_vec(&x), y);
                acc = module.add(&acc, &module.scale(&BigInt::from(-1), &term));
            }
            ensure(module.is_zero(&acc), || format!("{name}: η·x ≠ Σ ψ_i(x) y_i at {x:?}"))?;
            checked += 1;
        }
    }
    let non_free = modules.iter().any(|(n, _)| n.contains("(2, 2i)"));
    ensure(non_free, || "non-free ideal fixture missing".into())?;
    Ok(format!("{} modules, {checked} elements satisfy the η identity", modules.len()))
}

fn finite_fixtures() -> Vec<(String, OModule, u64)> {
    finite_modules()
        .into_iter()
        .filter(|(_, m, _)| m.torsion_order() <= BigInt::from(FINITE_SIZE_LIMIT))
        .collect()
}

fn killed_by(module: &OModule, ideal: &Lattice, x: &[BigInt]) -> bool {
    ideal.basis_vectors().iter().all(|beta| module.is_zero(&module.act(beta, x)))
}

fn criterion_4_crt() -> Check {
    let mut composites = 0usize;
    let mut cases = 0;
    for (name, module, p) in finite_fixtures() {
        let t = FiniteOModule::new(module.clone()).map_err(|e| e.to_string())?;
        let o = module.order();
        let ex = o.exponent_decomposition(p);
        let pb = BigInt::from(p);
        let elements = t.elements().map_err(|e| e.to_string())?;
        for n in ex.d.max(1)..=MAX_N {
            let tag = || format!("{name} p={p} n={n}");
            let rep = crt_maps(&t, p, n).map_err(|e| format!("{}: {e}", tag()))?;
            let ideals: Vec<Lattice> = o.contracted_ideals(p, n).unwrap().into_iter().map(|i| i.basis).collect();
            let g = ideals.len();
            let scalar = ex.c.pow(g as u32 - 1) * pb.pow(ex.d * g as u32);
            ensure(rep.scalar == scalar, || format!("{}: scalar {}", tag(), rep.scalar))?;
            let pd = pb.pow(ex.d);
            let domain: Vec<&Vec<BigInt>> = elements
                .iter()
                .filter(|x| module.is_zero(&module.scale(&pb.pow(n - ex.d), x)))
                .collect();
            let summands: Vec<Vec<&Vec<BigInt>>> = ideals
                .iter()
                .map(|id| elements.iter().filter(|x| killed_by(&module, id, x)).collect())
                .collect();
            let phi = |i: usize, x: &[BigInt]| module.act(&rep.b[i], x);
            let psi = |tuple: &[Vec<BigInt>]| {
                let sum = tuple.iter().fold(vec![BigInt::zero(); module.dim()], |acc, t| module.add(&acc, t));
                module.scale(&pd, &sum)
            };
            for x in &domain {
                let images: Vec<Vec<BigInt>> = (0..g).map(|i| phi(i, x)).collect();
                for (i, im) in images.iter().enumerate() {
                    ensure(killed_by(&module, &ideals[i], im), || format!("{}: φ leaves summand {i}", tag()))?;
                }
                ensure(module.equal(&psi(&images), &module.scale(&scalar, x)), || {
                    format!("{}: ψ∘φ ≠ scalar at {x:?}", tag())
                })?;
                composites += 1;
            }
            // φ∘ψ is additive, so checking one summand at a time suffices.
            for i in 0..g {
                for x in &summands[i] {
                    let tuple: Vec<Vec<BigInt>> = (0..g)
                        .map(|j| if j == i { (*x).clone() } else { vec![BigInt::zero(); module.dim()] })
                        .collect();
                    let u = psi(&tuple);
                    ensure(module.is_zero(&module.scale(&pb.pow(n - ex.d), &u)), || {
                        format!("{}: ψ leaves the domain", tag())
                    })?;
                    for (j, tj) in tuple.iter().enumerate() {
                        let lhs = phi(j, &u);
                        let rhs = module.scale(&scalar, tj);
                        ensure(module.equal(&lhs, &rhs), || format!("{}: φ∘ψ ≠ scalar on summand {i}", tag()))?;
                    }
                    composites += 1;
                }
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} (module, n) cases, {composites} elements, both composites equal the scalar"))
}

/// The subgroup of a finite module generated by `gens`.
fn subgroup(module: &OModule, gens: &[Vec<BigInt>]) -> HashSet<Vec<BigInt>> {
    let zero = module.reduce(&vec![BigInt::zero(); module.dim()]);
    let mut seen = HashSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(q) = frontier.pop() {
        for g in gens {
            let r = module.add(&q, g);
            if seen.insert(r.clone()) {
                frontier.push(r);
            }
        }
    }
    seen
}

fn criterion_5_evil() -> Check {
    let grid = EvilGrid::default();
    let (mut points, mut hypotheses_hold) = (0usize, 0usize);
    for (name, module, p) in finite_fixtures() {
        let ctx = EvilContext::new(&module, p, grid.max_exponent).map_err(|e| format!("{name}: {e}"))?;
        let d = ctx.d();
        let pb = BigInt::from(p);
        let elements = FiniteOModule::new(module.clone()).unwrap().elements().unwrap();
        let step = elements.len().div_ceil(grid.x_limit).max(1);
        let xs: Vec<&Vec<BigInt>> = elements.iter().step_by(step).collect();
        let alphas = box_vectors(module.order().rank(), grid.alpha_bound);
        let top = 2 * grid.max_exponent + d;
        let multiples: Vec<HashSet<Vec<BigInt>>> = (0..=top)
            .map(|k| elements.iter().map(|y| module.scale(&pb.pow(k), y)).collect())
            .collect();
        let basis: Vec<Vec<BigInt>> = (0..module.dim()).map(|i| module.basis_element(i)).collect();
        for i in 0..ctx.prime_count() {
            // 𝔭_{i,b} N by closure, for the second hypothesis.
            let ideal_n: Vec<HashSet<Vec<BigInt>>> = (0..=grid.max_exponent)
                .map(|b| {
                    let gens: Vec<Vec<BigInt>> = ctx
                        .ideal(i, b)
                        .basis
                        .basis_vectors()
                        .iter()
                        .flat_map(|beta| basis.iter().map(|y| module.act(beta, y)))
                        .collect();
                    subgroup(&module, &gens)
                })
                .collect();
            for a in 0..=grid.max_exponent {
                let torsion_a: Vec<&Vec<BigInt>> = elements
                    .iter()
                    .filter(|y| module.is_zero(&module.scale(&pb.pow(a + d), y)))
                    .collect();
                for b in 0..=grid.max_exponent {
                    let hyp3 = torsion_a.iter().all(|y| multiples[b as usize].contains(*y));
                    for alpha in &alphas {
                        let hyp1 = !ctx.ideal(i, a).basis.contains(alpha);
                        for x in &xs {
                            let v = ctx.evaluate(alpha, x, i, a, b);
                            points += 1;
                            let hyp2 = !ideal_n[b as usize].contains(*x);
                            ensure(v.hypotheses == [hyp1, hyp2, hyp3], || {
                                format!("{name}: hypotheses {:?} vs enumeration {:?}", v.hypotheses, [hyp1, hyp2, hyp3])
                            })?;
                            if !(hyp1 && hyp2 && hyp3) {
                                continue;
                            }
                            hypotheses_hold += 1;
                            let ax = module.act(alpha, x);
                            let outside = !multiples[(a + b + d) as usize].contains(&ax);
                            ensure(outside, || {
                                format!("{name}: counterexample α={alpha:?} x={x:?} i={i} a={a} b={b}")
                            })?;
                            ensure(v.conclusion == outside, || format!("{name}: lattice conclusion disagrees"))?;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{points} grid points, {hypotheses_hold} with all hypotheses, 0 counterexamples"))
}

fn point_order(curve: &CurveFp, q: &PointFp, multiple: u64) -> u64 {
    let mut divisors: Vec<u64> = (1..=multiple).filter(|k| multiple % k == 0).collect();
    divisors.sort_unstable();
    divisors.into_iter().find(|&k| curve.mul(k, q).is_infinity()).expect("multiple kills q")
}

fn criterion_6_elliptic() -> Check {
    let curves = [(0i64, 17i64), (-1, 0), (1, 1)];
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let (mut primes_checked, mut dlogs) = (0, 0);
    for (a4, a6) in curves {
        let curve = CurveQ::from_i64(a4, a6).map_err(|e| e.to_string())?;
        for p in primes_in(2, ELLIPTIC_PRIME_LIMIT) {
            let Ok(cp) = CurveFp::new(&curve, p) else { continue };
            let tag = || format!("y^2 = x^3 + {a4}x + {a6} mod {p}");
            let gs = group_structure(&cp, 1).map_err(|e| format!("{}: {e}", tag()))?;
            let n = count_points_oracle(a4, a6, p);
            let (d1, d2) = (gs.d1, gs.d2);
            ensure(gs.order_n == n, || format!("{}: #E = {} vs {n}", tag(), gs.order_n))?;
            ensure(d1 * d2 == n, || format!("{}: d1 d2 ≠ N", tag()))?;
            ensure(d2 % d1 == 0, || format!("{}: d1 ∤ d2", tag()))?;
            ensure((p - 1) % d1 == 0, || format!("{}: d1 ∤ p-1", tag()))?;
            let t = n as i128 - p as i128 - 1;
            ensure(t * t <= 4 * p as i128, || format!("{}: Hasse bound", tag()))?;
            ensure(point_order(&cp, &gs.b1, d2) == d1, || format!("{}: ord(b1) ≠ d1", tag()))?;
            ensure(point_order(&cp, &gs.b2, d2) == d2, || format!("{}: ord(b2) ≠ d2", tag()))?;
            for _ in 0..DLOG_SAMPLES {
                let q = cp.random_point(&mut rng);
                let (u, v) = gs.dlog(&q).ok_or_else(|| format!("{}: no dlog", tag()))?;
                let back = cp.add(&cp.mul(u, &gs.b1), &cp.mul(v, &gs.b2));
                ensure(back == q, || format!("{}: dlog round trip fails at {q:?}", tag()))?;
                // Coordinates are unique, so Z/d1 × Z/d2 really is the group.
                let (s, w) = (rng.gen_range(0..d1), rng.gen_range(0..d2));
                let r = cp.add(&cp.mul(s, &gs.b1), &cp.mul(w, &gs.b2));
                ensure(gs.dlog(&r) == Some((s, w)), || format!("{}: dlog not unique", tag()))?;
                dlogs += 2;
            }
            primes_checked += 1;
        }
    }
    Ok(format!("{primes_checked} (curve, prime) pairs, {dlogs} dlog round trips"))
}

fn formal_i64(f: &FormalPoint) -> Vec<i64> {
    f.coeffs.iter().map(|c| i64::try_from(c).unwrap()).collect()
}

fn criterion_7_scan() -> Check {
    let cfg = load("gajda_mordell17.json");
    let mw = cfg.presentation().map_err(|e| e.to_string())?;
    // On-curve by direct substitution: 3² = (-2)³ + 17 and 4² = (-1)³ + 17.
    for (x, y) in [(-2i64, 3i64), (-1, 4)] {
        ensure(y * y == x * x * x + 17, || format!("({x},{y}) not on the curve"))?;
    }
    let declared: Vec<RationalPoint> = mw.generators().to_vec();
    ensure(declared.len() == 2, || "expected two generators".into())?;

    let sigma_rows: Vec<Vec<i64>> = cfg.sigma_generators.iter().map(formal_i64).collect();
    ensure(sigma_rows == vec![vec![2, 0], vec![0, 2]], || "Σ should be ⟨2P1, 2P2⟩".into())?;
    ensure(formal_i64(cfg.x.as_ref().unwrap()) == vec![1, 0], || "x should be P1".into())?;
    ensure(cfg.prime_max == SCAN_PRIME_LIMIT, || "scan range".into())?;
    // x = P1 has odd first coordinate against Σ = 2Z², so it fails only at 2.
    let ed = smith_invariants_oracle(&sigma_rows);
    ensure(ed == ints(&[2, 2]), || format!("Σ invariants {ed:?}"))?;

    let Report::Gajda(rep) = run(&cfg).map_err(|e| e.to_string())? else {
        return Err("not a gajda report".into());
    };
    let lv = &rep.summary.lattice_verdict;
    ensure(!lv.in_sigma_plus_torsion, || "lattice places P1 in Σ".into())?;
    ensure(lv.local_failures == vec![2], || format!("local failures {:?}", lv.local_failures))?;
    ensure(!rep.summary.witnesses.is_empty(), || "no witness prime".into())?;
    ensure(rep.summary.smallest_witness == Some(SMALLEST_WITNESS), || {
        format!("smallest witness {:?}, pinned {SMALLEST_WITNESS}", rep.summary.smallest_witness)
    })?;
    // Independent confirmation below and at the pinned witness.
    for p in primes_in(2, SMALLEST_WITNESS) {
        let Ok(cp) = CurveFp::new(mw.curve(), p) else { continue };
        let p1 = cp.reduce_point(&declared[0]);
        let p2 = cp.reduce_point(&declared[1]);
        let all = cp.all_points();
        let gens = [cp.mul(2, &p1), cp.mul(2, &p2)];
        let mut sub: HashSet<PointFp> = HashSet::from([PointFp::Infinity]);
        let mut frontier = vec![PointFp::Infinity];
        while let Some(q) = frontier.pop() {
            for g in &gens {
                let r = cp.add(&q, g);
                if sub.insert(r) {
                    frontier.push(r);
                }
            }
        }
        ensure(sub.iter().all(|q| all.contains(q)), || "closure left the curve".into())?;
        let member = sub.contains(&p1);
        ensure(member == (p != SMALLEST_WITNESS), || format!("enumeration disagrees at p={p}"))?;
    }
    let witnesses = rep.summary.witnesses.len();
    let good = rep.per_prime.iter().filter(|r| r.status == PrimeStatus::Good).count();

    let member_cfg = load("gajda_mordell17_member.json");
    ensure(formal_i64(member_cfg.x.as_ref().unwrap()) == vec![2, 2], || "x should be 2P1+2P2".into())?;
    ensure(member_cfg.prime_max == SCAN_PRIME_LIMIT, || "scan range".into())?;
    let lv = lattice_verdict(2, &member_cfg.sigma_generators, member_cfg.x.as_ref().unwrap(), false);
    ensure(lv.in_sigma_plus_torsion, || "lattice misses 2P1+2P2".into())?;
    let Report::Gajda(rep) = run(&member_cfg).map_err(|e| e.to_string())? else {
        return Err("not a gajda report".into());
    };
    ensure(rep.summary.witnesses.is_empty(), || format!("member has witnesses {:?}", rep.summary.witnesses))?;
    Ok(format!(
        "P1: {witnesses} witnesses among {good} good primes, smallest {SMALLEST_WITNESS}; 2P1+2P2: none"
    ))
}

fn criterion_8_determinism() -> Check {
    let names = [
        "gajda_mordell17.json",
        "gajda_mordell17_member.json",
        "gajda_mordell17_mixed.json",
        "support_double.json",
        "support_independent.json",
        "algebra.json",
    ];
    let mut bytes = 0;
    for name in names {
        let cfg = load(name);
        let mut outputs = Vec::new();
        for threads in [1, 4, 4] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            outputs.push(pool.install(|| run(&cfg)).map_err(|e| format!("{name}: {e}"))?.to_json_lines());
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{name}: reports differ"))?;
        bytes += outputs[0].len();
    }
    Ok(format!("{} configs, {bytes} report bytes identical under 1 and 4 threads", names.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Option<Duration>, fn() -> Check); 8] = [
        ("SNF oracle equivalence", Some(SNF_BUDGET), criterion_1_smith),
        ("order-ideal inclusions", Some(INCLUSION_BUDGET), criterion_2_inclusions),
        ("pre-basis eta identity", None, criterion_3_eta),
        ("CRT scalar composites", None, criterion_4_crt),
        ("obstruction check grid", None, criterion_5_evil),
        ("elliptic group invariants", Some(ELLIPTIC_BUDGET), criterion_6_elliptic),
        ("reduction scan witnesses", Some(SCAN_BUDGET), criterion_7_scan),
        ("report determinism", None, criterion_8_determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, budget, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.1?}, budget {b:?}")),
            (o, _) => o,
        };
        let timing = match budget {
            Some(b) => format!("{:.3}s, budget {}s", elapsed.as_secs_f64(), b.as_secs()),
            None => format!("{:.3}s", elapsed.as_secs_f64()),
        };
        match outcome {
            Ok(detail) => println!("PASS  criterion {}  {name}: {detail} ({timing})", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {}  {name}: {why} ({timing})", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
