#![allow(dead_code)]

use ltonp::complementary::{complementary_pair, ComplementaryPair};
use ltonp::kernel::{c64, CMatrix, C64};
use ltonp::problem::{gramians, PickData, ProblemData, STEIN_TOL};
use ltonp::sample::random_instance;
use ltonp::solver::{coefficient_system, CoefficientSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Setup {
    pub prob: ProblemData,
    pub pick: PickData,
    pub pair: ComplementaryPair,
    pub coeffs: CoefficientSystem,
}

impl Setup {
    pub fn new(prob: ProblemData) -> Self {
        let pick = gramians(&prob, STEIN_TOL).unwrap();
        let pair = complementary_pair(&prob, &pick, 1e-10).unwrap();
        let coeffs = coefficient_system(&prob, &pick, &pair).unwrap();
        Self { prob, pick, pair, coeffs }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_setup(rng: &mut ChaCha8Rng) -> Setup {
    Setup::new(random_instance(rng).unwrap())
}

/// Points of modulus at most `radius`, uniform in angle and radius.
pub fn disc_points(rng: &mut ChaCha8Rng, count: usize, radius: f64) -> Vec<C64> {
    (0..count)
        .map(|_| {
            let r = rng.random_range(0.0..radius);
            let t = rng.random_range(0.0..core::f64::consts::TAU);
            c64(r * t.cos(), r * t.sin())
        })
        .collect()
}

pub fn scalar(x: f64) -> CMatrix {
    CMatrix::from_element(1, 1, c64(x, 0.0))
}
