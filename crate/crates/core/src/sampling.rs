//! Seeded sampling of small exact rationals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactpoly::{rat, Rational};
use crate::quiverrep::{Quiver, Representation};
use crate::symmatrix::SymMatrix;

/// Default master seed for every randomized check.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Deterministic source of small integers and rationals.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Independent sampler for sub-task `index` of a master seed.
    pub fn derived(seed: u64, index: u64) -> Self {
        Sampler::new(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17))
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Integer in `[-9, 9]` as a rational.
    pub fn small(&mut self) -> Rational {
        rat(self.int_in(-9, 9))
    }

    pub fn nonzero_small(&mut self) -> Rational {
        loop {
            let v = self.int_in(-9, 9);
            if v != 0 {
                return rat(v);
            }
        }
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> SymMatrix {
        let values: Vec<Rational> = (0..rows * cols).map(|_| self.small()).collect();
        SymMatrix::from_rationals(rows, cols, &values).expect("shape")
    }

    /// Square matrix with nonzero determinant (degenerate draws are redrawn).
    pub fn invertible_matrix(&mut self, n: usize) -> SymMatrix {
        loop {
            let m = self.matrix(n, n);
            if !m.det().expect("square").is_zero() {
                return m;
            }
        }
    }

    /// A concrete representation with random entries.
    pub fn representation(&mut self, q: &Quiver, dims: &[usize]) -> Representation {
        let matrices = (0..q.num_arrows()).map(|i| self.matrix(dims[q.head(i)], dims[q.tail(i)])).collect();
        Representation::new(q, dims.to_vec(), matrices).expect("shapes match dims")
    }
}
