//! Small orders used by tests, examples and the command line.

use num_bigint::BigInt;

use super::{check_order, NormalizedOrder, Normalization, NumberFieldComponent, Order};
use crate::lattice::IntMatrix;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn build(order: Order, polys: &[&[i64]], embedding: &[Vec<i64>]) -> NormalizedOrder {
    let components = polys
        .iter()
        .map(|f| NumberFieldComponent::monogenic(ints(f)).expect("fixture component"))
        .collect();
    check_order(
        order,
        Normalization {
            components,
            embedding: IntMatrix::from_i64(embedding),
        },
    )
    .expect("fixture order")
}

/// `Z`
pub fn integers() -> NormalizedOrder {
    build(Order::integers(), &[&[0, 1]], &[vec![1]])
}

/// `Z × Z` in the idempotent basis.
pub fn z_times_z() -> NormalizedOrder {
    let z = Order::integers();
    build(
        Order::product(&[z.clone(), z]),
        &[&[0, 1], &[0, 1]],
        &[vec![1, 0], vec![0, 1]],
    )
}

/// `{(a, b) ∈ Z × Z : a ≡ b mod 2}` with basis `(1,1), (0,2)`.
pub fn z_times_z_conductor_two() -> NormalizedOrder {
    let order = Order::monogenic(&ints(&[0, -2, 1]));
    build(order, &[&[0, 1], &[0, 1]], &[vec![1, 1], vec![0, 2]])
}

/// `Z[i]`
pub fn gaussian() -> NormalizedOrder {
    build(
        Order::monogenic(&ints(&[1, 0, 1])),
        &[&[1, 0, 1]],
        &[vec![1, 0], vec![0, 1]],
    )
}

/// `Z[2i] ⊂ Z[i]`
pub fn gaussian_conductor_two() -> NormalizedOrder {
    build(
        Order::monogenic(&ints(&[4, 0, 1])),
        &[&[1, 0, 1]],
        &[vec![1, 0], vec![0, 2]],
    )
}

/// `Z[ω]`, `ω² + ω + 1 = 0`
pub fn eisenstein() -> NormalizedOrder {
    build(
        Order::monogenic(&ints(&[1, 1, 1])),
        &[&[1, 1, 1]],
        &[vec![1, 0], vec![0, 1]],
    )
}

/// `Z[√-3] ⊂ Z[ω]`, with `√-3 = 1 + 2ω`.
pub fn sqrt_minus_three() -> NormalizedOrder {
    build(
        Order::monogenic(&ints(&[3, 0, 1])),
        &[&[1, 1, 1]],
        &[vec![1, 0], vec![1, 2]],
    )
}

/// `Z[i] × Z`
pub fn gaussian_times_z() -> NormalizedOrder {
    build(
        Order::product(&[Order::monogenic(&ints(&[1, 0, 1])), Order::integers()]),
        &[&[1, 0, 1], &[0, 1]],
        &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
    )
}

/// `Z[∛2]`
pub fn cube_root_two() -> NormalizedOrder {
    build(
        Order::monogenic(&ints(&[-2, 0, 0, 1])),
        &[&[-2, 0, 0, 1]],
        &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
    )
}

pub const NAMES: &[&str] = &[
    "Z",
    "ZxZ",
    "ZxZ_cond2",
    "Z[i]",
    "Z[2i]",
    "Z[w]",
    "Z[sqrt-3]",
    "Z[i]xZ",
    "Z[cbrt2]",
];

pub fn by_name(name: &str) -> Option<NormalizedOrder> {
    Some(match name {
        "Z" => integers(),
        "ZxZ" => z_times_z(),
        "ZxZ_cond2" => z_times_z_conductor_two(),
        "Z[i]" => gaussian(),
        "Z[2i]" => gaussian_conductor_two(),
        "Z[w]" => eisenstein(),
        "Z[sqrt-3]" => sqrt_minus_three(),
        "Z[i]xZ" => gaussian_times_z(),
        "Z[cbrt2]" => cube_root_two(),
        _ => return None,
    })
}
