mod common;

use common::*;
use mwlocal_core::lattice::{
    adapted_basis, hnf, lattice_index, left_kernel, membership_localized, right_kernel, snf, solve_integer,
    unimodular_inverse, IntMatrix, Lattice, LatticeIndex,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn matrix_strategy(max_dim: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
    })
}

fn assert_smith(a: &[Vec<i64>]) {
    let m = IntMatrix::from_i64(a);
    let dec = snf(&m);
    assert!(dec.u.is_unimodular() && dec.v.is_unimodular());
    assert!(det_oracle(&dec.u.row_vecs()).magnitude().is_one());
    assert!(det_oracle(&dec.v.row_vecs()).magnitude().is_one());
    assert_eq!(dec.u.mul(&m).mul(&dec.v), dec.d, "UAV != D for {a:?}");
    for i in 0..dec.d.rows() {
        for j in 0..dec.d.cols() {
            if i != j {
                assert!(dec.d.get(i, j).is_zero());
            }
        }
    }
    let inv = dec.invariants();
    for w in inv.windows(2) {
        assert!(!w[0].is_negative());
        if !w[0].is_zero() {
            assert!((&w[1] % &w[0]).is_zero(), "chain broken: {inv:?}");
        } else {
            assert!(w[1].is_zero());
        }
    }
    let expected: Vec<BigInt> = smith_invariants_oracle(a);
    assert_eq!(inv, expected, "invariants of {a:?}");
}

#[test]
fn smith_examples() {
    assert_smith(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let dec = snf(&IntMatrix::from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
    assert_eq!(dec.invariants(), ints(&[2, 6, 12]));
    assert_smith(&[vec![0, 0], vec![0, 0]]);
    assert_smith(&[vec![6, 10, 15]]);
    assert_eq!(snf(&IntMatrix::from_i64(&[vec![6, 10, 15]])).invariants(), ints(&[1]));
}

#[test]
fn hermite_shape_and_transform() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let a = IntMatrix::from_i64(&random_matrix(&mut rng, r, c, 9));
        let dec = hnf(&a);
        assert!(dec.u.is_unimodular());
        assert_eq!(dec.u.mul(&a), dec.h);
        let rank = dec.rank();
        assert_eq!(rank, snf(&a).rank());
        let mut last = None;
        for (i, &pc) in dec.pivots.iter().enumerate() {
            assert!(last.map_or(true, |l| pc > l), "pivots not increasing");
            last = Some(pc);
            assert!(dec.h.get(i, pc).is_positive());
            for j in 0..pc {
                assert!(dec.h.get(i, j).is_zero());
            }
            for k in 0..i {
                let e = dec.h.get(k, pc);
                assert!(!e.is_negative() && e < dec.h.get(i, pc), "entry above pivot not reduced");
            }
        }
        for i in rank..r {
            assert!(dec.h.row(i).iter().all(Zero::is_zero));
        }
    }
}

#[test]
fn unimodular_inverse_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let n = rng.gen_range(1..=5);
        let a = IntMatrix::from_i64(&random_matrix(&mut rng, n, n, 6));
        let u = snf(&a).u;
        let inv = unimodular_inverse(&u).unwrap();
        assert_eq!(u.mul(&inv), IntMatrix::identity(n));
    }
    assert!(unimodular_inverse(&IntMatrix::from_i64(&[vec![2, 0], vec![0, 1]])).is_none());
}

/// Exhaustive search for `a·x = b` with `x` in a box.
fn solve_brute(a: &[Vec<i64>], b: &[i64], bound: i64) -> bool {
    let n = a[0].len();
    box_vectors(n, bound).into_iter().any(|x| {
        a.iter().zip(b).all(|(row, &bi)| {
            row.iter().zip(&x).map(|(&r, xi)| BigInt::from(r) * xi).sum::<BigInt>() == BigInt::from(bi)
        })
    })
}

#[test]
fn solve_integer_agrees_with_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..300 {
        let (r, c) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a = random_matrix(&mut rng, r, c, 4);
        // Half the right-hand sides are images of small vectors.
        let b: Vec<i64> = if rng.gen_bool(0.5) {
            let x: Vec<i64> = (0..c).map(|_| rng.gen_range(-3..=3)).collect();
            a.iter().map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum()).collect()
        } else {
            (0..r).map(|_| rng.gen_range(-6..=6)).collect()
        };
        let m = IntMatrix::from_i64(&a);
        match solve_integer(&m, &ints(&b)) {
            Some(x) => assert_eq!(m.mul_vec(&x), ints(&b)),
            // A solution in a small box would contradict the claim.
            None => assert!(!solve_brute(&a, &b, 6), "missed a solution of {a:?} x = {b:?}"),
        }
    }
    assert!(solve_integer(&IntMatrix::from_i64(&[vec![2]]), &ints(&[3])).is_none());
}

#[test]
fn kernels() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let a = IntMatrix::from_i64(&random_matrix(&mut rng, r, c, 5));
        let rank = snf(&a).rank();
        let lk = left_kernel(&a);
        assert_eq!(lk.rows(), r - rank);
        assert!(lk.mul(&a).is_zero());
        let rk = right_kernel(&a);
        assert_eq!(rk.rows(), c - rank);
        assert!(a.mul(&rk.transpose()).is_zero());
        // Saturated: the kernel lattice has no finite-index overlattice in ker.
        if rk.rows() > 0 {
            assert!(snf(&rk).invariants().iter().all(One::is_one));
        }
    }
}

#[test]
fn index_matches_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let a = random_matrix(&mut rng, n, n, 7);
        let l = Lattice::from_vectors(n, &int_rows(&a));
        let det = det_oracle(&int_rows(&a));
        let idx = lattice_index(&l, &Lattice::full(n)).unwrap();
        if det.is_zero() {
            assert_eq!(idx, LatticeIndex::Infinite);
        } else {
            assert_eq!(idx, LatticeIndex::Finite(det.abs()));
        }
    }
    let sub = Lattice::from_vectors(2, &[ints(&[4, 0]), ints(&[0, 6])]);
    let sup = Lattice::from_vectors(2, &[ints(&[2, 0]), ints(&[0, 3])]);
    assert_eq!(lattice_index(&sub, &sup).unwrap(), LatticeIndex::Finite(big(4)));
    assert!(lattice_index(&sup, &sub).is_err());
}

#[test]
fn intersection_and_sum_by_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let points = box_vectors(2, 12);
    for _ in 0..40 {
        let a = Lattice::from_vectors(2, &int_rows(&random_matrix(&mut rng, 2, 2, 5)));
        let b = Lattice::from_vectors(2, &int_rows(&random_matrix(&mut rng, 2, 2, 5)));
        let inter = a.intersection(&b);
        let sum = a.sum(&b);
        for v in &points {
            assert_eq!(inter.contains(v), a.contains(v) && b.contains(v), "{v:?}");
            if a.contains(v) || b.contains(v) {
                assert!(sum.contains(v));
            }
        }
        assert!(inter.is_sublattice_of(&a) && inter.is_sublattice_of(&b));
        assert!(a.is_sublattice_of(&sum) && b.is_sublattice_of(&sum));
    }
}

/// Least `k ≥ 1` with `k·x ∈ M`, searched up to `limit`.
fn order_modulo(x: &[BigInt], m: &Lattice, limit: i64) -> Option<i64> {
    (1..=limit).find(|&k| m.contains(&x.iter().map(|c| c * k).collect::<Vec<_>>()))
}

#[test]
fn adapted_basis_and_local_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..60 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=n);
        let gens = random_matrix(&mut rng, k, n, 6);
        let m = Lattice::from_vectors(n, &int_rows(&gens));
        let ab = adapted_basis(&m, n, &BigInt::one());
        let y = IntMatrix::from_rows(ab.basis_vectors.clone(), n);
        assert!(y.is_unimodular());
        let scaled: Vec<Vec<BigInt>> = ab
            .basis_vectors
            .iter()
            .zip(&ab.elementary_divisors)
            .map(|(v, d)| v.iter().map(|c| c * d).collect())
            .collect();
        assert_eq!(Lattice::from_vectors(n, &scaled), m);
        let mut nonzero: Vec<BigInt> = ab.elementary_divisors.iter().filter(|d| !d.is_zero()).cloned().collect();
        nonzero.sort();
        let oracle: Vec<BigInt> = smith_invariants_oracle(&gens).into_iter().filter(|d| !d.is_zero()).collect();
        assert_eq!(nonzero, oracle);

        let index = oracle.iter().fold(BigInt::one(), |a, d| a * d);
        let limit = i64::try_from(&index).unwrap().max(1);
        for x in box_vectors(n, 2) {
            let coords = ab.coordinates(&x);
            let back = y.left_mul_vec(&coords);
            assert_eq!(back, x);
            for p in [2u64, 3, 5] {
                let pb = BigInt::from(p);
                let local = membership_localized(&x, &m, &BigInt::one(), &pb);
                // x ∈ M ⊗ Z_(p) iff some k prime to p puts k·x in M.
                let expected = order_modulo(&x, &m, limit).is_some_and(|o| o % p as i64 != 0);
                assert_eq!(local, expected, "x={x:?} M={gens:?} p={p}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn smith_matches_minors(a in matrix_strategy(5, 20)) {
        assert_smith(&a);
    }

    #[test]
    fn hnf_is_canonical(a in matrix_strategy(4, 9), seed in any::<u64>()) {
        // Row operations do not change the Hermite form of the row lattice.
        let m = IntMatrix::from_i64(&a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut shuffled = m.clone();
        for _ in 0..6 {
            let (i, j) = (rng.gen_range(0..a.len()), rng.gen_range(0..a.len()));
            if i != j {
                shuffled.add_row_multiple(i, j, &big(rng.gen_range(-3..=3)));
            } else {
                shuffled.negate_row(i);
            }
        }
        prop_assert_eq!(hnf(&m).h, hnf(&shuffled).h);
    }
}
