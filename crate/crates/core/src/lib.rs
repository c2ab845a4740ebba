//! Exact algebra over orders and their modules, together with the elliptic
//! curve machinery used to test subgroup membership through reductions modulo
//! primes.

pub mod lattice;
pub mod serde_int;
pub mod order;
pub mod module;
pub mod elliptic;
pub mod experiment;
