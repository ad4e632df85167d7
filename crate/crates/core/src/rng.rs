//! Counter-based, splittable random number generation.
//!
//! Every draw is a pure function of `(key, counter)`:
//!
//! ```text
//! output(key, i) = mix64(key + i * 0x9E3779B97F4A7C15)     (wrapping, i >= 1)
//! mix64(z)       = z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!                  z ^= z >> 27; z *= 0x94D049BB133111EB;
//!                  z ^ (z >> 31)
//! ```
//!
//! which is the SplitMix64 output sequence for seed `key`. A child stream
//! is derived with `split(stream)`:
//!
//! ```text
//! child_key = mix64(key ^ mix64(stream + 0xD1B54A32D192ED03))
//! ```
//!
//! The derived samplers below (`below`, `unit_f64`, `bernoulli`) are part
//! of the frozen contract so that runs can be reproduced from a seed alone
//! without depending on a third-party sampling implementation.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_SALT: u64 = 0xD1B5_4A32_D192_ED03;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimRng {
    key: u64,
    counter: u64,
}

impl SimRng {
    pub fn new(seed: u64) -> Self {
        Self { key: seed, counter: 0 }
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    /// Independent child stream; does not advance `self`.
    pub fn split(&self, stream: u64) -> SimRng {
        SimRng::new(mix64(self.key ^ mix64(stream.wrapping_add(STREAM_SALT))))
    }

    /// Random access into this stream without advancing it.
    pub fn at(&self, counter: u64) -> u64 {
        mix64(self.key.wrapping_add(counter.wrapping_mul(GAMMA)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        self.at(self.counter)
    }

    /// Uniform integer in `[0, n)` (Lemire's multiply-shift with rejection).
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = (self.next_u64() as u128) * (n as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    pub fn below_usize(&mut self, n: usize) -> usize {
        self.below(n as u64) as usize
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        if p <= 0.0 {
            false
        } else if p >= 1.0 {
            true
        } else {
            self.unit_f64() < p
        }
    }

    /// Index drawn with probability proportional to `weights[i]`.
    /// Returns `None` when all weights are zero.
    pub fn weighted_index(&mut self, weights: &[u64]) -> Option<usize> {
        let total: u64 = weights.iter().sum();
        if total == 0 {
            return None;
        }
        let mut r = self.below(total);
        for (i, &w) in weights.iter().enumerate() {
            if r < w {
                return Some(i);
            }
            r -= w;
        }
        unreachable!("weighted_index ran past total")
    }

    /// `k` distinct indices from `[0, n)`, in draw order (partial Fisher-Yates).
    pub fn sample_distinct(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot draw {k} distinct values from {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below_usize(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}
