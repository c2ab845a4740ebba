use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::fp::{factorize, CurveFp, PointFp};
use super::EllipticError;
use crate::lattice::{IntMatrix, Lattice};

/// Random samples spent per ℓ-part before falling back to walking every point.
pub const DEFAULT_SAMPLE_BUDGET: usize = 64;

/// Baby-step giant-step in a cyclic group of prime order `l`.
#[derive(Clone, Debug)]
struct Bsgs {
    g: PointFp,
    l: u64,
    m: u64,
    baby: HashMap<PointFp, u64>,
    /// `−m·g`
    giant: PointFp,
}

impl Bsgs {
    fn new(curve: &CurveFp, g: PointFp, l: u64) -> Self {
        let m = (l as f64).sqrt().ceil() as u64 + 1;
        let mut baby = HashMap::with_capacity(m as usize);
        let mut acc = PointFp::Infinity;
        for j in 0..m {
            baby.entry(acc).or_insert(j);
            acc = curve.add(&acc, &g);
        }
        let giant = curve.neg(&curve.mul(m, &g));
        Bsgs { g, l, m, baby, giant }
    }

    /// `d ∈ [0, l)` with `d·g = h`.
    fn log(&self, curve: &CurveFp, h: &PointFp) -> Option<u64> {
        let mut gamma = *h;
        for i in 0..=self.m {
            if let Some(&j) = self.baby.get(&gamma) {
                let d = (i * self.m + j) % self.l;
                debug_assert_eq!(curve.mul(d, &self.g), *h);
                return Some(d);
            }
            gamma = curve.add(&gamma, &self.giant);
        }
        None
    }
}

/// The ℓ-primary part `Z/ℓ^a ⊕ Z/ℓ^b`, `a ≤ b`, with generators `u` and `v`
/// taken as the cofactor multiples of the global basis.
#[derive(Clone, Debug)]
struct PrimaryPart {
    l: u64,
    a: u32,
    b: u32,
    cofactor: u64,
    u: PointFp,
    v: PointFp,
    /// `ℓ^{a−1}·u`, or the identity when `a = 0`.
    u1: PointFp,
    /// Logarithms to base `ℓ^{b−1}·v`.
    table: Bsgs,
}

/// `E(F_p) ≅ Z/d1 ⊕ Z/d2` with `d1 | d2` and generators `B1`, `B2`.
#[derive(Clone, Debug, Serialize)]
pub struct GroupStructureFp {
    pub p: u64,
    pub order_n: u64,
    pub d1: u64,
    pub d2: u64,
    pub b1: PointFp,
    pub b2: PointFp,
    #[serde(skip)]
    curve: CurveFp,
    #[serde(skip)]
    parts: Vec<PrimaryPart>,
}

fn exponent_of(curve: &CurveFp, q: &PointFp, l: u64, max: u32) -> u32 {
    let mut acc = *q;
    let mut t = 0;
    while !acc.is_infinity() && t < max + 1 {
        acc = curve.mul(l, &acc);
        t += 1;
    }
    t
}

/// Logarithm of `target` to base `v` of order `ℓ^b`, by digits.
fn log_cyclic(curve: &CurveFp, v: &PointFp, b: u32, l: u64, table: &Bsgs, target: &PointFp) -> Option<u64> {
    let mut x = 0u64;
    let mut lj = 1u64;
    for j in 0..b {
        let resid = curve.sub(target, &curve.mul(x, v));
        let h = curve.mul(l.pow(b - 1 - j), &resid);
        let d = table.log(curve, &h)?;
        x += d * lj;
        lj *= l;
    }
    (curve.mul(x, v) == *target).then_some(x)
}

/// Greedy basis search in the ℓ-part of order `ℓ^e`.
struct PartSearch<'c> {
    curve: &'c CurveFp,
    l: u64,
    e: u32,
    cofactor: u64,
    v: PointFp,
    b: u32,
    table: Option<Bsgs>,
    u: PointFp,
    t: u32,
}

impl<'c> PartSearch<'c> {
    fn new(curve: &'c CurveFp, l: u64, e: u32, cofactor: u64) -> Self {
        PartSearch {
            curve,
            l,
            e,
            cofactor,
            v: PointFp::Infinity,
            b: 0,
            table: None,
            u: PointFp::Infinity,
            t: 0,
        }
    }

    fn done(&self) -> bool {
        self.b + self.t == self.e
    }

    fn offer(&mut self, sample: &PointFp) {
        let c = self.curve;
        let r = c.mul(self.cofactor, sample);
        let s = exponent_of(c, &r, self.l, self.e);
        if s > self.b {
            self.v = r;
            self.b = s;
            self.table = Some(Bsgs::new(c, c.mul(self.l.pow(s - 1), &r), self.l));
            self.u = PointFp::Infinity;
            self.t = 0;
            return;
        }
        let Some(table) = &self.table else { return };
        // Least t' with ℓ^{t'}·r ∈ ⟨v⟩; then r − (k/ℓ^{t'})·v has order ℓ^{t'}
        // and meets ⟨v⟩ trivially. ℓ^s·r = O, so the search ends.
        let mut scaled = r;
        for tp in 0..=s {
            if let Some(k) = log_cyclic(c, &self.v, self.b, self.l, table, &scaled) {
                if tp > self.t {
                    let ltp = self.l.pow(tp);
                    debug_assert_eq!(k % ltp, 0);
                    self.u = c.sub(&r, &c.mul(k / ltp, &self.v));
                    self.t = tp;
                }
                return;
            }
            scaled = c.mul(self.l, &scaled);
        }
    }
}

/// `#E(F_p)` and a basis, found from seeded random samples. Each ℓ-part
/// falls back to walking every point when the budget runs out.
pub fn group_structure(curve: &CurveFp, seed: u64) -> Result<GroupStructureFp, EllipticError> {
    group_structure_with(curve, seed, DEFAULT_SAMPLE_BUDGET)
}

pub fn group_structure_with(curve: &CurveFp, seed: u64, budget: usize) -> Result<GroupStructureFp, EllipticError> {
    let n = curve.count_points()?;
    let p = curve.p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ p);
    let mut found = Vec::new();
    let mut all_points: Option<Vec<PointFp>> = None;
    for (l, e) in factorize(n) {
        let cofactor = n / l.pow(e);
        let mut search = PartSearch::new(curve, l, e, cofactor);
        let mut spent = 0;
        while !search.done() && spent < budget {
            search.offer(&curve.random_point(&mut rng));
            spent += 1;
        }
        if !search.done() {
            let pts = all_points.get_or_insert_with(|| curve.all_points());
            // Two passes: the first settles an element of maximal order.
            for q in pts.iter().chain(pts.iter()) {
                if search.done() {
                    break;
                }
                search.offer(q);
            }
        }
        if !search.done() {
            return Err(EllipticError::StructureSearchExhausted(p));
        }
        found.push((l, search.t, search.b, search.u, search.v));
    }

    let mut b1 = PointFp::Infinity;
    let mut b2 = PointFp::Infinity;
    let (mut d1, mut d2) = (1u64, 1u64);
    for &(l, a, b, u, v) in &found {
        b1 = curve.add(&b1, &u);
        b2 = curve.add(&b2, &v);
        d1 *= l.pow(a);
        d2 *= l.pow(b);
    }
    let parts = found
        .iter()
        .map(|&(l, a, b, _, _)| {
            let cofactor = n / l.pow(a + b);
            let u = curve.mul(cofactor, &b1);
            let v = curve.mul(cofactor, &b2);
            let u1 = if a == 0 { PointFp::Infinity } else { curve.mul(l.pow(a - 1), &u) };
            let table = Bsgs::new(curve, curve.mul(l.pow(b - 1), &v), l);
            PrimaryPart { l, a, b, cofactor, u, v, u1, table }
        })
        .collect();
    let gs = GroupStructureFp {
        p,
        order_n: n,
        d1,
        d2,
        b1,
        b2,
        curve: curve.clone(),
        parts,
    };
    gs.check_invariants().map_err(|_| EllipticError::StructureSearchExhausted(p))?;
    Ok(gs)
}

/// `x mod m` from residues modulo pairwise coprime moduli.
fn crt(residues: &[(u64, u64)]) -> u64 {
    let mut x = BigInt::from(0);
    let mut m = BigInt::from(1);
    for &(r, q) in residues {
        let q = BigInt::from(q);
        let e = m.extended_gcd(&q);
        // x + m·k ≡ r (mod q)
        let k = ((BigInt::from(r) - &x) * e.x).mod_floor(&q);
        x += &m * k;
        m *= q;
        x = x.mod_floor(&m);
    }
    u64::try_from(x).expect("fits")
}

impl GroupStructureFp {
    pub fn curve(&self) -> &CurveFp {
        &self.curve
    }

    pub fn exponent(&self) -> u64 {
        self.d2
    }

    /// `d1·d2 = N`, `d1 | d2`, `d1 | p − 1`, the Hasse bound and the orders of
    /// both generators.
    pub fn check_invariants(&self) -> Result<(), String> {
        let p = self.p as i128;
        let trace = self.order_n as i128 - p - 1;
        if trace * trace > 4 * p {
            return Err(format!("Hasse bound fails: N = {}", self.order_n));
        }
        if self.d1 * self.d2 != self.order_n {
            return Err("d1·d2 ≠ N".into());
        }
        if self.d2 % self.d1 != 0 {
            return Err("d1 ∤ d2".into());
        }
        if (self.p - 1) % self.d1 != 0 {
            return Err("d1 ∤ p − 1".into());
        }
        if self.point_order(&self.b1) != self.d1 || self.point_order(&self.b2) != self.d2 {
            return Err("generator orders differ from d1, d2".into());
        }
        Ok(())
    }

    /// `(q1 mod d1, q2 mod d2)` with `q1·B1 + q2·B2 = Q`, by Pohlig–Hellman
    /// over the ℓ-parts. `None` only for points off the curve.
    pub fn dlog(&self, q: &PointFp) -> Option<(u64, u64)> {
        if !self.curve.contains(q) {
            return None;
        }
        let c = &self.curve;
        let mut r1 = Vec::new();
        let mut r2 = Vec::new();
        for part in &self.parts {
            let (a, b, l) = (part.a, part.b, part.l);
            let target = c.mul(part.cofactor, q);
            let (mut x, mut y) = (0u64, 0u64);
            for j in 0..b {
                let resid = c.sub(&target, &c.add(&c.mul(x, &part.u), &c.mul(y, &part.v)));
                let h = c.mul(l.pow(b - 1 - j), &resid);
                if j < b - a {
                    y += part.table.log(c, &h)? * l.pow(j);
                } else {
                    let i = j - (b - a);
                    let mut rest = h;
                    let mut hit = None;
                    for dx in 0..l {
                        if let Some(dy) = part.table.log(c, &rest) {
                            hit = Some((dx, dy));
                            break;
                        }
                        rest = c.sub(&rest, &part.u1);
                    }
                    let (dx, dy) = hit?;
                    x += dx * l.pow(i);
                    y += dy * l.pow(j);
                }
            }
            r1.push((x, l.pow(a)));
            r2.push((y, l.pow(b)));
        }
        let out = (crt(&r1), crt(&r2));
        debug_assert_eq!(self.recompose(out.0, out.1), *q);
        Some(out)
    }

    pub fn recompose(&self, q1: u64, q2: u64) -> PointFp {
        self.curve
            .add(&self.curve.mul(q1, &self.b1), &self.curve.mul(q2, &self.b2))
    }

    /// Exact order, descending from the group exponent one prime at a time.
    pub fn point_order(&self, q: &PointFp) -> u64 {
        let mut ord = self.d2;
        for (l, _) in factorize(self.d2) {
            while ord % l == 0 && self.curve.mul(ord / l, q).is_infinity() {
                ord /= l;
            }
        }
        ord
    }

    /// Whether `Q ∈ m·E(F_p)`.
    pub fn divisibility(&self, q: &PointFp, m: u64) -> bool {
        let (q1, q2) = self.dlog(q).expect("point on curve");
        q1 % self.d1.gcd(&m) == 0 && q2 % self.d2.gcd(&m) == 0
    }

    /// Whether `Q` lies in the subgroup generated by `gens`.
    pub fn subgroup_membership(&self, q: &PointFp, gens: &[PointFp]) -> bool {
        let mut rows: Vec<Vec<i64>> = gens
            .iter()
            .map(|g| {
                let (a, b) = self.dlog(g).expect("point on curve");
                vec![a as i64, b as i64]
            })
            .collect();
        rows.push(vec![self.d1 as i64, 0]);
        rows.push(vec![0, self.d2 as i64]);
        let lattice = Lattice::from_generators(2, &IntMatrix::from_i64(&rows));
        let (q1, q2) = self.dlog(q).expect("point on curve");
        lattice.contains(&[BigInt::from(q1), BigInt::from(q2)])
    }
}
