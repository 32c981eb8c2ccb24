//! Seeded random streams.
//!
//! Every engine component draws from its own ChaCha stream derived from one
//! 64-bit seed, so runs are reproducible and components do not perturb each
//! other's draws.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng as StreamRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Substream {
    Reservoir = 1,
    Skip = 2,
    Exploration = 3,
    Hasher = 4,
}

pub fn substream(seed: u64, which: Substream) -> StreamRng {
    let mut rng = StreamRng::seed_from_u64(seed);
    rng.set_stream(which as u64);
    rng
}

/// Uniform `f64` in `[0, 1)` with 53 bits of resolution.
#[inline]
pub(crate) fn unit<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform `f64` in `(0, 1]`, safe to pass to `ln`.
#[inline]
pub(crate) fn unit_open<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform integer in `[0, n)`.
#[inline]
pub(crate) fn below<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> usize {
    debug_assert!(n > 0);
    rng.random_range(0..n)
}
