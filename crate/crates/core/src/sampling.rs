//! Deterministic seeded sampling for the numeric verifier and the
//! randomized suites.
//!
//! A fixed SplitMix64 generator keeps the point sequences identical across
//! platforms and dependency upgrades; reports quote the seed so any run can
//! be reproduced exactly.

use crate::complex::{cx, Cx};

/// SplitMix64 pseudo-random generator.
#[derive(Debug, Clone)]
pub struct Rng64 {
    state: u64,
}

impl Rng64 {
    pub fn new(seed: u64) -> Self {
        Rng64 { state: seed }
    }

    /// Derive an independent stream for a sub-task, keyed by index.
    pub fn substream(&self, index: u64) -> Rng64 {
        let mut r = Rng64::new(self.state ^ (0x9E3779B97F4A7C15u64.wrapping_mul(index + 1)));
        r.next_u64();
        Rng64::new(r.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [-1, 1].
    pub fn unit(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }

    /// Uniform integer in `[lo, hi]` (inclusive).
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    /// Complex scalar with both parts uniform in [-1, 1].
    pub fn cx_unit(&mut self) -> Cx {
        cx(self.unit(), self.unit())
    }

    /// Small Gaussian integer, nonzero.
    pub fn gaussian_int_nonzero(&mut self, max: i64) -> Cx {
        loop {
            let z = cx(self.int_in(-max, max) as f64, self.int_in(-max, max) as f64);
            if z != cx(0.0, 0.0) {
                return z;
            }
        }
    }

    /// Point in the unit polydisc of C^n: every coordinate has Re and Im
    /// uniform in [-1, 1].
    pub fn polydisc_point(&mut self, arity: usize) -> Vec<Cx> {
        (0..arity).map(|_| self.cx_unit()).collect()
    }
}
