//! Deterministic 64-bit generator for the verification suites.
//!
//! SplitMix64 (Steele, Lea, Flood; the reference generator from the
//! `java.util.SplittableRandom` paper): state advances by the golden-ratio
//! increment `0x9E3779B97F4A7C15` and each output is finalized with two
//! xor-shift multiplies. The whole algorithm is these eight lines, so seeds
//! reproduce counterexamples across platforms and toolchains.

use num_rational::BigRational;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound` (`bound > 0`).
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // Multiply-shift reduction; the bias is irrelevant at these sizes.
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    /// Uniform value in `lo..=hi`.
    pub fn range_inclusive(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        lo + self.below(hi - lo + 1)
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }

    /// A positive rational with numerator in `1..=max_numer` and
    /// denominator in `1..=max_denom`.
    pub fn positive_rational(&mut self, max_numer: u64, max_denom: u64) -> BigRational {
        let n = self.range_inclusive(1, max_numer);
        let d = self.range_inclusive(1, max_denom);
        BigRational::new((n as i64).into(), (d as i64).into())
    }

    /// Derive an independent stream for a named property and trial index,
    /// so suite ordering never changes what each trial sees.
    pub fn derive(seed: u64, label: &str, trial: u64) -> SplitMix64 {
        let mut h = seed ^ 0xD6E8_FEB8_6659_FD93;
        for b in label.bytes() {
            h = (h ^ b as u64).wrapping_mul(0x100_0000_01B3);
        }
        let mut rng = SplitMix64::new(h);
        for _ in 0..(trial % 8) {
            rng.next_u64();
        }
        SplitMix64::new(rng.next_u64() ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}
