//! Portable seeded draws for the workload generator.
//!
//! The stream is SplitMix64 (Vigna's reference constants) with the state
//! initialised to the seed itself. Bounded draws use rejection sampling on
//! the full 64-bit output so every implementation that follows the same
//! steps reproduces the same workloads bit for bit.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

#[derive(Debug, Clone)]
pub struct SlotRng {
    inner: SplitMix64,
}

impl SlotRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `[0, max]`.
    ///
    /// `max == 0` returns 0 and consumes nothing. Otherwise with
    /// `range = max + 1` and `reject = 2^64 mod range`, outputs `x < reject`
    /// are discarded and the first accepted `x` yields `x mod range`.
    /// `max == u64::MAX` returns the raw output.
    pub fn uniform_inclusive(&mut self, max: u64) -> u64 {
        if max == 0 {
            return 0;
        }
        let Some(range) = max.checked_add(1) else {
            return self.next_u64();
        };
        let reject = range.wrapping_neg() % range;
        loop {
            let x = self.next_u64();
            if x >= reject {
                return x % range;
            }
        }
    }
}
