use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use super::curve::{CurveQ, RationalPoint};
use super::EllipticError;

pub const DEFAULT_PRIME_LIMIT: u64 = 1_000_000;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes in `[lo, hi]`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 {
        return Vec::new();
    }
    let n = hi as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            (i * i..=n).step_by(i).for_each(|j| sieve[j] = false);
        }
        i += 1;
    }
    (lo.max(2) as usize..=n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// A square root of `a` modulo the odd prime `p`, if one exists.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    // Tonelli–Shanks with p − 1 = q·2^s.
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// A point of `E(F_p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PointFp {
    Infinity,
    Affine(u64, u64),
}

impl PointFp {
    pub fn is_infinity(&self) -> bool {
        matches!(self, PointFp::Infinity)
    }
}

/// The reduction of a curve at a good prime `p > 3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveFp {
    p: u64,
    a4: u64,
    a6: u64,
}

fn reduce_int(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

impl CurveFp {
    pub fn new(curve: &CurveQ, p: u64) -> Result<Self, EllipticError> {
        if p <= 3 || !is_prime(p) || (curve.discriminant() % BigInt::from(p)).is_zero() {
            return Err(EllipticError::BadReduction(p));
        }
        Ok(CurveFp {
            p,
            a4: reduce_int(curve.a4(), p),
            a6: reduce_int(curve.a6(), p),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn rhs(&self, x: u64) -> u64 {
        let p = self.p;
        (mul_mod(mul_mod(x, x, p), x, p) + mul_mod(self.a4, x, p) + self.a6) % p
    }

    pub fn contains(&self, q: &PointFp) -> bool {
        match *q {
            PointFp::Infinity => true,
            PointFp::Affine(x, y) => x < self.p && y < self.p && mul_mod(y, y, self.p) == self.rhs(x),
        }
    }

    pub fn neg(&self, q: &PointFp) -> PointFp {
        match *q {
            PointFp::Infinity => PointFp::Infinity,
            PointFp::Affine(x, y) => PointFp::Affine(x, (self.p - y) % self.p),
        }
    }

    pub fn add(&self, a: &PointFp, b: &PointFp) -> PointFp {
        let p = self.p;
        let (x1, y1, x2, y2) = match (*a, *b) {
            (PointFp::Infinity, _) => return *b,
            (_, PointFp::Infinity) => return *a,
            (PointFp::Affine(x1, y1), PointFp::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2) % p == 0 {
                return PointFp::Infinity;
            }
            let num = (mul_mod(3, mul_mod(x1, x1, p), p) + self.a4) % p;
            mul_mod(num, inv_mod(2 * y1 % p, p), p)
        } else {
            mul_mod((y2 + p - y1) % p, inv_mod((x2 + p - x1) % p, p), p)
        };
        let x3 = (mul_mod(lambda, lambda, p) + 2 * p - x1 - x2) % p;
        let y3 = (mul_mod(lambda, (x1 + p - x3) % p, p) + p - y1) % p;
        PointFp::Affine(x3, y3)
    }

    pub fn sub(&self, a: &PointFp, b: &PointFp) -> PointFp {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, k: u64, q: &PointFp) -> PointFp {
        let mut acc = PointFp::Infinity;
        let mut base = *q;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// `k·Q` for a signed big integer `k`.
    pub fn mul_big(&self, k: &BigInt, q: &PointFp) -> PointFp {
        let (sign, mag) = (k.sign(), k.magnitude());
        let mut acc = PointFp::Infinity;
        for i in (0..mag.bits()).rev() {
            acc = self.add(&acc, &acc);
            if mag.bit(i) {
                acc = self.add(&acc, q);
            }
        }
        if sign == num_bigint::Sign::Minus {
            self.neg(&acc)
        } else {
            acc
        }
    }

    /// Reduction through primitive projective coordinates; a point whose
    /// denominator is divisible by `p` lands on the identity.
    pub fn reduce_point(&self, q: &RationalPoint) -> PointFp {
        let [x, y, z] = q.projective();
        let zr = reduce_int(&z, self.p);
        if zr == 0 {
            return PointFp::Infinity;
        }
        let zi = inv_mod(zr, self.p);
        PointFp::Affine(
            mul_mod(reduce_int(&x, self.p), zi, self.p),
            mul_mod(reduce_int(&y, self.p), zi, self.p),
        )
    }

    /// `#E(F_p)` by summing Legendre symbols, using a table of squares.
    pub fn count_points_bounded(&self, limit: u64) -> Result<u64, EllipticError> {
        if self.p > limit {
            return Err(EllipticError::PrimeTooLarge { p: self.p, limit });
        }
        let p = self.p as usize;
        let mut square = vec![false; p];
        for y in 0..p as u64 {
            square[mul_mod(y, y, self.p) as usize] = true;
        }
        let mut n = 1u64;
        for x in 0..self.p {
            let v = self.rhs(x);
            n += if v == 0 {
                1
            } else if square[v as usize] {
                2
            } else {
                0
            };
        }
        Ok(n)
    }

    pub fn count_points(&self) -> Result<u64, EllipticError> {
        self.count_points_bounded(DEFAULT_PRIME_LIMIT)
    }

    /// A uniformly chosen affine abscissa with a random choice of root.
    pub fn random_point<R: Rng>(&self, rng: &mut R) -> PointFp {
        loop {
            let x = rng.gen_range(0..self.p);
            if let Some(y) = sqrt_mod(self.rhs(x), self.p) {
                let y = if rng.gen::<bool>() { y } else { (self.p - y) % self.p };
                return PointFp::Affine(x, y);
            }
        }
    }

    /// Every point, identity first, then affine points by `(x, y)`.
    pub fn all_points(&self) -> Vec<PointFp> {
        let mut out = vec![PointFp::Infinity];
        for x in 0..self.p {
            if let Some(y) = sqrt_mod(self.rhs(x), self.p) {
                let mut ys = vec![y, (self.p - y) % self.p];
                ys.sort_unstable();
                ys.dedup();
                out.extend(ys.into_iter().map(|y| PointFp::Affine(x, y)));
            }
        }
        out
    }
}
