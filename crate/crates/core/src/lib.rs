//! Numerics for entanglement area laws of Landau-level projections.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coeffs;
pub mod disk_spectra;
pub mod error;
pub mod geometry;
pub mod identities;
pub mod landau_kernel;
pub mod linalg;
pub mod region_sim;
pub mod specfun;

pub use error::{Error, Result};

/// Derives a sub-seed from a base seed and a shard index (splitmix64).
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
