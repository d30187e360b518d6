//! Seeded random polynomial jets for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{JetSeries, Multi, Scalar};

/// Deterministic generator of exact polynomial jets with bounded degree and
/// coefficient height.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
    dim: usize,
    max_degree: u32,
    height: i64,
}

impl Sampler {
    pub fn new(seed: u64, dim: usize) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dim,
            max_degree: 3,
            height: 3,
        }
    }

    pub fn with_max_degree(mut self, max_degree: u32) -> Self {
        self.max_degree = max_degree;
        self
    }

    pub fn with_height(mut self, height: i64) -> Self {
        self.height = height.max(1);
        self
    }

    fn coefficient(&mut self) -> Scalar {
        let num = self.rng.gen_range(-self.height..=self.height);
        let den = self.rng.gen_range(1..=2);
        Scalar::ratio(num, den)
    }

    fn draw(&mut self, holo: bool, anti: bool, skip_constant: bool) -> JetSeries {
        let basis = Multi::up_to_degree(self.dim, self.max_degree, holo, anti);
        loop {
            let mut terms = Vec::new();
            for m in &basis {
                if (skip_constant && m.is_zero()) || !self.rng.gen_bool(0.5) {
                    continue;
                }
                terms.push((m.clone(), self.coefficient()));
            }
            let f = JetSeries::from_terms(self.dim, crate::algebra::EXACT, terms);
            if !f.is_zero() {
                return f;
            }
        }
    }

    /// A nonzero polynomial in `z` and `z̄`.
    pub fn jet(&mut self) -> JetSeries {
        self.draw(true, true, false)
    }

    /// A nonzero polynomial in `z` alone.
    pub fn holomorphic(&mut self) -> JetSeries {
        self.draw(true, false, false)
    }

    /// A nonzero polynomial in `z̄` alone.
    pub fn antiholomorphic(&mut self) -> JetSeries {
        self.draw(false, true, false)
    }

    /// A nonzero polynomial without constant term, suitable as a potential perturbation.
    pub fn perturbation(&mut self) -> JetSeries {
        self.draw(true, true, true)
    }

    pub fn jets(&mut self, count: usize) -> Vec<JetSeries> {
        (0..count).map(|_| self.jet()).collect()
    }

    pub fn pairs(&mut self, count: usize) -> Vec<(JetSeries, JetSeries)> {
        (0..count).map(|_| (self.jet(), self.jet())).collect()
    }
}
