use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::{condition_number, CMatrix, LinalgError, C64};

const FLAG_CONDITION_LIMIT: f64 = 1.0e6;
const FLAG_TRIES: usize = 100;

/// Reproducible random stream: ChaCha20 keyed by a 64-bit seed
/// (`seed_from_u64`), with independent substreams selected through the
/// ChaCha stream counter. Output depends only on the seed, never on the
/// platform or thread schedule.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha20Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream `index` of this seed; does not advance `self`.
    pub fn substream(&self, index: u64) -> RandomSource {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(index.wrapping_add(1));
        Self {
            seed: self.seed,
            rng,
        }
    }

    /// Draws a fresh seed from this stream and returns a source keyed by it.
    pub fn fork(&mut self) -> RandomSource {
        RandomSource::new(self.rng.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
    pub fn gaussian(&mut self) -> C64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// Uniform point on the unit circle.
    pub fn unit_complex(&mut self) -> C64 {
        let theta = self.uniform() * std::f64::consts::TAU;
        C64::from_polar(1.0, theta)
    }

    pub fn gaussian_vec(&mut self, len: usize) -> Vec<C64> {
        (0..len).map(|_| self.gaussian()).collect()
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.gaussian())
    }
}

/// Random complex Gaussian `n x n` matrix with condition number below 1e6.
pub fn random_flag_matrix(n: usize, rng: &mut RandomSource) -> Result<CMatrix, LinalgError> {
    for _ in 0..FLAG_TRIES {
        let m = rng.gaussian_matrix(n, n);
        if condition_number(&m) < FLAG_CONDITION_LIMIT {
            return Ok(m);
        }
    }
    Err(LinalgError::RandomFlagExhausted { tries: FLAG_TRIES })
}
