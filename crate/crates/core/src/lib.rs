//! Exact equivariant vertex computations for Hilbert schemes of points on C^4.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation on immutable values: partition enumeration, Laurent
//! characters of the 4-torus, factored rational functions in the
//! equivariant parameters, truncated power series over exact rings,
//! the combinatorial weights of solid partitions, and the verification
//! drivers that tie them together. IO, file formats and the command line
//! live in the `dt4` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod combinatorics;
pub mod kchar;
pub mod localization;
pub mod partitions;
pub mod poly;
pub mod series;
pub mod verifier;

pub use combinatorics::{binary_indicator, decompositions, omega_c, Decomposition};
pub use kchar::{bar, char_of_partition, specialize_cy, vertex_character, LaurentChar};
pub use localization::{
    euler_class, specialize_limit, tautological_factor, vertex_weight, LinearForm,
    LinearFormFactored, LocalizationError, SpecializedValue,
};
pub use partitions::{enumerate_partitions, CanonicalKey, DPartition, PartitionError};
pub use poly::{Coeff, Poly};
pub use series::{macmahon, SeriesError, TruncatedSeries};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
