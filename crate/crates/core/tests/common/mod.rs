#![allow(dead_code)]

use std::sync::Arc;

use mwlocal_core::lattice::IntMatrix;
use mwlocal_core::module::OModule;
use mwlocal_core::order::{fixtures, NormalizedOrder};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn order(name: &str) -> Arc<NormalizedOrder> {
    Arc::new(fixtures::by_name(name).expect("fixture order"))
}

pub fn ideal_module(o: &Arc<NormalizedOrder>, gens: &[Vec<i64>]) -> OModule {
    let gens: Vec<Vec<BigInt>> = gens.iter().map(|g| ints(g)).collect();
    OModule::from_ideal(o.clone(), &o.order().ideal_from_generators(&gens)).unwrap()
}

/// `O / 𝔭_{i,n}`
pub fn quotient_by_prime_power(o: &Arc<NormalizedOrder>, p: u64, i: usize, n: u32) -> OModule {
    let pr = &o.primes_over(p).unwrap()[i];
    let id = o.contracted_ideal(pr, n);
    OModule::free(o.clone(), 1).quotient_by_ideal(&id.basis).unwrap()
}

/// Modules with a free part, some of them with torsion and some non-free.
pub fn fixture_modules() -> Vec<(String, OModule)> {
    let mut out = Vec::new();
    let z = order("Z");
    out.push(("Z".into(), OModule::free(z.clone(), 1)));
    out.push(("Z^2".into(), OModule::free(z.clone(), 2)));
    out.push((
        "Z+Z/4".into(),
        OModule::new(z.clone(), 1, vec![big(4)], vec![IntMatrix::identity(2)]).unwrap(),
    ));
    out.push((
        "Z^2+Z/6+Z/2".into(),
        OModule::free(z.clone(), 2)
            .direct_sum(&OModule::free(z.clone(), 1).quotient_by_scalar(&big(6)).unwrap())
            .direct_sum(&OModule::free(z.clone(), 1).quotient_by_scalar(&big(2)).unwrap()),
    ));

    let zz = order("ZxZ");
    out.push(("ZxZ".into(), OModule::free(zz.clone(), 1)));
    // Z with the first factor acting.
    out.push((
        "ZxZ on first factor".into(),
        OModule::new(
            zz.clone(),
            1,
            vec![],
            vec![IntMatrix::from_i64(&[vec![1]]), IntMatrix::from_i64(&[vec![0]])],
        )
        .unwrap(),
    ));
    out.push(("(ZxZ)^2".into(), OModule::free(zz.clone(), 2)));

    let zi = order("Z[i]");
    out.push(("Z[i]".into(), OModule::free(zi.clone(), 1)));
    out.push(("Z[i]^2".into(), OModule::free(zi.clone(), 2)));
    out.push(("(5, i-2)".into(), ideal_module(&zi, &[vec![5, 0], vec![-2, 1]])));
    out.push((
        "Z[i] + Z[i]/(2+i)".into(),
        OModule::free(zi.clone(), 1).direct_sum(
            &OModule::free(zi.clone(), 1)
                .quotient_by_ideal(&zi.order().ideal_from_generators(&[ints(&[2, 1])]))
                .unwrap(),
        ),
    ));

    let z2i = order("Z[2i]");
    out.push(("Z[2i]".into(), OModule::free(z2i.clone(), 1)));
    // The conductor 2Z[i] is not a free Z[2i]-module.
    out.push(("(2, 2i) in Z[2i]".into(), ideal_module(&z2i, &[vec![2, 0], vec![0, 1]])));

    let s3 = order("Z[sqrt-3]");
    out.push(("Z[sqrt-3]".into(), OModule::free(s3.clone(), 1)));
    out.push(("(2, 1+sqrt-3)".into(), ideal_module(&s3, &[vec![2, 0], vec![1, 1]])));
    out.push((
        "Z[sqrt-3] + Z[sqrt-3]/4".into(),
        OModule::free(s3.clone(), 1)
            .direct_sum(&OModule::free(s3.clone(), 1).quotient_by_scalar(&big(4)).unwrap()),
    ));

    let c2 = order("ZxZ_cond2");
    out.push(("ZxZ_cond2".into(), OModule::free(c2.clone(), 1)));
    out.push(("ZxZ_cond2^2".into(), OModule::free(c2, 2)));

    let zix = order("Z[i]xZ");
    out.push(("Z[i]xZ".into(), OModule::free(zix, 1)));
    out
}

/// Finite modules of size at most 10^4, each with a prime to test at.
pub fn finite_modules() -> Vec<(String, OModule, u64)> {
    let mut out = Vec::new();
    let z = order("Z");
    for (p, k) in [(2u64, 3u32), (2, 5), (3, 3), (5, 2), (5, 4)] {
        let q = big(p as i64).pow(k);
        out.push((
            format!("Z/{q}"),
            OModule::free(z.clone(), 1).quotient_by_scalar(&q).unwrap(),
            p,
        ));
    }
    out.push((
        "Z/4+Z/8".into(),
        OModule::free(z.clone(), 1)
            .quotient_by_scalar(&big(4))
            .unwrap()
            .direct_sum(&OModule::free(z.clone(), 1).quotient_by_scalar(&big(8)).unwrap()),
        2,
    ));

    let zi = order("Z[i]");
    out.push(("Z[i]/25".into(), OModule::free(zi.clone(), 1).quotient_by_scalar(&big(25)).unwrap(), 5));
    out.push(("Z[i]/p1^3 (p=5)".into(), quotient_by_prime_power(&zi, 5, 0, 3), 5));
    out.push(("Z[i]/p2^2 (p=5)".into(), quotient_by_prime_power(&zi, 5, 1, 2), 5));
    out.push(("Z[i]/8".into(), OModule::free(zi.clone(), 1).quotient_by_scalar(&big(8)).unwrap(), 2));
    out.push(("Z[i]/27".into(), OModule::free(zi.clone(), 1).quotient_by_scalar(&big(27)).unwrap(), 3));

    let s3 = order("Z[sqrt-3]");
    for k in 1..=4u32 {
        let q = big(2).pow(k);
        out.push((
            format!("Z[sqrt-3]/{q}"),
            OModule::free(s3.clone(), 1).quotient_by_scalar(&q).unwrap(),
            2,
        ));
    }
    out.push((
        "Z[sqrt-3]/(4, 2+2sqrt-3)".into(),
        OModule::free(s3.clone(), 1)
            .quotient_by_ideal(&s3.order().ideal_from_generators(&[ints(&[4, 0]), ints(&[2, 2])]))
            .unwrap(),
        2,
    ));
    out.push(("Z[sqrt-3]/9".into(), OModule::free(s3.clone(), 1).quotient_by_scalar(&big(9)).unwrap(), 3));

    let z2i = order("Z[2i]");
    out.push(("Z[2i]/8".into(), OModule::free(z2i.clone(), 1).quotient_by_scalar(&big(8)).unwrap(), 2));
    out.push(("Z[2i]/25".into(), OModule::free(z2i, 1).quotient_by_scalar(&big(25)).unwrap(), 5));

    let zz = order("ZxZ");
    out.push(("ZxZ/9".into(), OModule::free(zz.clone(), 1).quotient_by_scalar(&big(9)).unwrap(), 3));
    out.push((
        "ZxZ/(4,2)".into(),
        OModule::free(zz.clone(), 1)
            .quotient_by_ideal(&zz.order().ideal_from_generators(&[ints(&[4, 2])]))
            .unwrap(),
        2,
    ));

    let c2 = order("ZxZ_cond2");
    out.push(("ZxZ_cond2/8".into(), OModule::free(c2.clone(), 1).quotient_by_scalar(&big(8)).unwrap(), 2));
    out.push(("ZxZ_cond2/9".into(), OModule::free(c2, 1).quotient_by_scalar(&big(9)).unwrap(), 3));
    out
}

pub fn random_element(module: &OModule, rng: &mut ChaCha8Rng, bound: i64) -> Vec<BigInt> {
    let v: Vec<BigInt> = (0..module.dim()).map(|_| big(rng.gen_range(-bound..=bound))).collect();
    module.reduce(&v)
}

/// All vectors in `[-bound, bound]^n`.
pub fn box_vectors(n: usize, bound: i64) -> Vec<Vec<BigInt>> {
    let side = (2 * bound + 1) as usize;
    (0..side.pow(n as u32))
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let d = (idx % side) as i64 - bound;
                    idx /= side;
                    big(d)
                })
                .collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) determinant; every division is exact.
pub fn det_oracle(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a = m.to_vec();
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Smith invariants from determinantal divisors: `d_k = D_k / D_{k-1}` with
/// `D_k` the gcd of all `k×k` minors. Zero once the rank is exceeded.
pub fn smith_invariants_oracle(m: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let subsets = |n: usize, k: usize| -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|s| s.count_ones() as usize == k)
            .map(|s| (0..n).filter(|&i| s >> i & 1 == 1).collect())
            .collect()
    };
    let mut out = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=rows.min(cols) {
        let mut dk = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<BigInt>> =
                    rs.iter().map(|&r| cs.iter().map(|&c| big(m[r][c])).collect()).collect();
                dk = dk.gcd(&det_oracle(&minor));
            }
        }
        if dk.is_zero() {
            out.resize(rows.min(cols), BigInt::zero());
            break;
        }
        out.push(&dk / &prev);
        prev = dk;
    }
    out
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect()
}

pub fn int_rows(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| ints(r)).collect()
}

/// `#E(F_p)` for `y² = x³ + a x + b` from Euler's criterion, point by point.
pub fn count_points_oracle(a: i64, b: i64, p: u64) -> u64 {
    let pw = |mut base: u128, mut e: u64| {
        let m = p as u128;
        let mut acc = 1u128;
        base %= m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        acc
    };
    let am = a.rem_euclid(p as i64) as u128;
    let bm = b.rem_euclid(p as i64) as u128;
    let m = p as u128;
    let mut n = 1u64;
    for x in 0..m {
        let rhs = (x * x % m * x + am * x + bm) % m;
        n += if rhs == 0 {
            1
        } else if pw(rhs, (p - 1) / 2) == 1 {
            2
        } else {
            0
        };
    }
    n
}
