//! Small polynomial helpers: rational polynomials modulo a monic integer
//! polynomial, polynomials over F_p, and an irreducibility test over Q for
//! low degree.
//!
//! Coefficients are stored lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `a · b mod f` for rational `a`, `b` of degree `< deg f` and monic `f`.
pub(crate) fn mul_mod_monic(a: &[BigRational], b: &[BigRational], f: &[BigInt]) -> Vec<BigRational> {
    let n = f.len() - 1;
    let mut prod = vec![BigRational::zero(); 2 * n.max(1)];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            prod[i + j] += ai * bj;
        }
    }
    reduce_mod_monic(prod, f)
}

pub(crate) fn reduce_mod_monic(mut p: Vec<BigRational>, f: &[BigInt]) -> Vec<BigRational> {
    let n = f.len() - 1;
    for k in (n..p.len()).rev() {
        let c = std::mem::take(&mut p[k]);
        if c.is_zero() {
            continue;
        }
        // x^k = x^(k-n) * x^n, x^n = -Σ f_i x^i
        for (i, fi) in f.iter().enumerate().take(n) {
            p[k - n + i] -= &c * BigRational::from_integer(fi.clone());
        }
    }
    p.truncate(n);
    p.resize(n, BigRational::zero());
    p
}

/// `x^k` reduced modulo `f`, as rational coefficients.
pub(crate) fn power_of_x(k: usize, f: &[BigInt]) -> Vec<BigRational> {
    let mut p = vec![BigRational::zero(); k + 1];
    p[k] = BigRational::one();
    reduce_mod_monic(p, f)
}

/// Polynomial over F_p with reduced coefficients; leading zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn from_integer_poly(f: &[BigInt], p: u64) -> Self {
        let pb = BigInt::from(p);
        Self::new(
            p,
            f.iter()
                .map(|c| c.mod_floor(&pb).to_u64().expect("reduced coefficient fits"))
                .collect(),
        )
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &FpPoly) -> (FpPoly, FpPoly) {
        let p = self.p;
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = self.inv(divisor.coeffs[dd]);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (FpPoly::new(p, vec![]), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k] * lead_inv % p;
            if c == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (i, di) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                rem[idx] = (rem[idx] + p - c * di % p) % p;
            }
        }
        (FpPoly::new(p, quot), FpPoly::new(p, rem))
    }

    /// All monic polynomials of the given degree, in lexicographic order of
    /// the low coefficients.
    pub fn monic_of_degree(p: u64, degree: usize) -> impl Iterator<Item = FpPoly> {
        let count = p.checked_pow(degree as u32).expect("enumeration too large");
        (0..count).map(move |mut idx| {
            let mut coeffs = Vec::with_capacity(degree + 1);
            for _ in 0..degree {
                coeffs.push(idx % p);
                idx /= p;
            }
            coeffs.push(1);
            FpPoly::new(p, coeffs)
        })
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Factorization of a monic polynomial over F_p into monic irreducibles with
/// multiplicities, by trial division with monic polynomials of increasing
/// degree. Only meant for small degree.
pub fn factor_mod_p(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.p;
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut k = 1;
    while let Some(deg) = rest.degree() {
        if deg == 0 {
            break;
        }
        if deg < 2 * k {
            // No factor of degree < k remains, so what is left is irreducible.
            out.push((rest.clone(), 1));
            break;
        }
        for g in FpPoly::monic_of_degree(p, k) {
            let mut mult = 0;
            loop {
                let (q, r) = rest.div_rem(&g);
                if r.degree().is_some() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((g, mult));
            }
            if rest.degree().is_none_or(|d| d < 2 * k) {
                break;
            }
        }
        k += 1;
    }
    merge_equal(out)
}

fn merge_equal(mut fs: Vec<(FpPoly, u32)>) -> Vec<(FpPoly, u32)> {
    let mut merged: Vec<(FpPoly, u32)> = Vec::new();
    fs.sort_by(|a, b| {
        a.0.coeffs
            .len()
            .cmp(&b.0.coeffs.len())
            .then_with(|| a.0.coeffs.cmp(&b.0.coeffs))
    });
    for (g, e) in fs {
        match merged.last_mut() {
            Some((h, m)) if *h == g => *m += e,
            _ => merged.push((g, e)),
        }
    }
    merged
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

fn eval(f: &[BigInt], x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Irreducibility over Q of a monic integer polynomial of degree ≤ 4.
/// Returns `None` for larger degree.
pub fn is_irreducible_over_q(f: &[BigInt]) -> Option<bool> {
    let deg = f.len().checked_sub(1)?;
    if deg == 0 || deg > 4 {
        return None;
    }
    if deg == 1 {
        return Some(true);
    }
    let a0 = &f[0];
    if a0.is_zero() {
        return Some(false);
    }
    // Monic: rational roots are integer divisors of a0.
    for d in divisors(a0) {
        if eval(f, &d).is_zero() || eval(f, &-d).is_zero() {
            return Some(false);
        }
    }
    if deg <= 3 {
        return Some(true);
    }
    // Quartic without linear factor: look for (x²+ax+b)(x²+cx+e).
    let (a1, a2, a3) = (&f[1], &f[2], &f[3]);
    for b in divisors(a0).into_iter().flat_map(|d| [d.clone(), -d]) {
        let e = a0 / &b;
        // a + c = a3, b + e + a c = a2  =>  a² - a3 a + (a2 - b - e) = 0
        let disc = a3 * a3 - BigInt::from(4) * (a2 - &b - &e);
        let Some(s) = int_sqrt(&disc) else { continue };
        for num in [a3 + &s, a3 - &s] {
            if !num.is_even() {
                continue;
            }
            let a = num / 2;
            let c = a3 - &a;
            if &a * &e + &b * &c == *a1 {
                return Some(false);
            }
        }
    }
    Some(true)
}
