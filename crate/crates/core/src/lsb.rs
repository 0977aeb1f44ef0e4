//! Low-bit substitution primitives.

use crate::params::CARRIER_BITS;

const CHUNK_MASK: u8 = (1 << CARRIER_BITS) - 1;

/// Replaces the `n` least significant bits of `value` with `bits`.
///
/// The most significant bit of the `n`-bit pattern lands in bit `n - 1`.
/// Bits of `bits` above position `n - 1` are ignored.
pub fn set_n_lsbs(value: u8, n: u32, bits: u8) -> u8 {
    assert!((1..=8).contains(&n), "n must be in 1..=8, got {n}");
    let mask = (((1u16 << n) - 1) & 0xFF) as u8;
    debug_assert!(bits & !mask == 0, "pattern {bits:#b} wider than {n} bits");
    (value & !mask) | (bits & mask)
}

/// Returns the `n` least significant bits of `value`.
pub fn get_n_lsbs(value: u8, n: u32) -> u8 {
    assert!((1..=8).contains(&n), "n must be in 1..=8, got {n}");
    value & ((((1u16 << n) - 1) & 0xFF) as u8)
}

/// `upperbound` with its three low bits cleared.
pub fn lowerbound_of(upperbound: u8) -> u8 {
    set_n_lsbs(upperbound, CARRIER_BITS, 0)
}

/// Writes a 3-bit chunk into the low bits of a carrier byte.
pub fn embed_chunk(carrier: u8, chunk: u8) -> u8 {
    set_n_lsbs(carrier, CARRIER_BITS, chunk & CHUNK_MASK)
}

/// Reads the 3-bit chunk held by a carrier byte.
pub fn extract_chunk(carrier: u8) -> u8 {
    carrier & CHUNK_MASK
}
