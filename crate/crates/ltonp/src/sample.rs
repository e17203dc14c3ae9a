//! Random test instances, generic over any `rand::Rng`.
//!
//! Instances have `ρ(Z) ≤ 0.8`, `cond(P) ≤ 10⁴` with `P ≥ 0.1·I`, and `B̃` scaled down
//! by factors of `0.8` until `min eig Λ ≥ 0.05`.

use crate::error::{Error, Result};
use crate::fronts::{leech_truncate, LeechInstance};
use crate::kernel::{c64, identity, min_hermitian_eigenvalue, operator_norm, spectral_radius, CMatrix};
use crate::problem::{gramians, ProblemData, STEIN_TOL};
use crate::system::RationalSystem;
use alloc::vec::Vec;
use rand::Rng;

pub const MAX_STATE_RADIUS: f64 = 0.8;
pub const LAMBDA_FLOOR: f64 = 0.05;
pub const SHRINK: f64 = 0.8;
/// Lower bound on `min eig P` relative to `‖P‖`.
pub const P_CONDITION_FLOOR: f64 = 1e-4;
/// `B` is rescaled so that `min eig P` is at least this.
pub const P_FLOOR: f64 = 0.1;

/// Entries with real and imaginary parts uniform in `[−1, 1]`.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c64(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
}

/// A matrix of operator norm uniform in `[0, 1]`.
pub fn random_contraction<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let m = random_matrix(rng, rows, cols);
    let norm = operator_norm(&m);
    if norm == 0.0 {
        return m;
    }
    m * c64(rng.random_range(0.0..=1.0) / norm, 0.0)
}

/// A realization with contractive system matrix, `states` states, `outputs×inputs`.
pub fn random_contractive_system<R: Rng + ?Sized>(
    rng: &mut R,
    outputs: usize,
    inputs: usize,
    states: usize,
) -> Result<RationalSystem> {
    let m = random_contraction(rng, outputs + states, inputs + states);
    RationalSystem::new(
        m.view((outputs, inputs), (states, states)).into_owned(),
        m.view((outputs, 0), (states, inputs)).into_owned(),
        m.view((0, inputs), (outputs, states)).into_owned(),
        m.view((0, 0), (outputs, inputs)).into_owned(),
    )
}

/// Stable `Z` with spectral radius uniform in `[0.1, 0.8]`.
pub fn random_stable<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<CMatrix> {
    let z = random_matrix(rng, n, n);
    let rho = spectral_radius(&z)?;
    let target = rng.random_range(0.1..=MAX_STATE_RADIUS);
    Ok(if rho > 0.0 { z * c64(target / rho, 0.0) } else { z })
}

/// Random instance with the given dimensions and `Λ ≫ 0`.
pub fn random_instance_with_dims<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize, q: usize) -> Result<ProblemData> {
    loop {
        let z = random_stable(rng, n)?;
        let mut b = random_matrix(rng, n, p);
        let probe = ProblemData::new(z.clone(), b.clone(), CMatrix::zeros(n, q))?;
        let pick = gramians(&probe, STEIN_TOL)?;
        if pick.p_min_eig < P_CONDITION_FLOOR * operator_norm(&pick.p) {
            continue;
        }
        if pick.p_min_eig < P_FLOOR {
            b *= c64(libm::sqrt(P_FLOOR / pick.p_min_eig), 0.0);
        }
        let mut bt = random_matrix(rng, n, q) * c64(4.0, 0.0);
        for _ in 0..200 {
            let prob = ProblemData::new(z.clone(), b.clone(), bt.clone())?;
            let pick = gramians(&prob, STEIN_TOL)?;
            if min_hermitian_eigenvalue(&pick.lambda)? >= LAMBDA_FLOOR {
                return Ok(prob);
            }
            bt *= c64(SHRINK, 0.0);
        }
    }
}

/// `n ∈ 1..=6`, `p, q ∈ 1..=3`.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R) -> Result<ProblemData> {
    let n = rng.random_range(1..=6);
    let p = rng.random_range(1..=3);
    let q = rng.random_range(1..=3);
    random_instance_with_dims(rng, n, p, q)
}

/// Polynomial Leech data with `degree` coefficients whose order-`N` section
/// has `min eig Λ ≥ 0.05`, obtained by shrinking `K`. Needs `v ≤ p`.
pub fn random_leech<R: Rng + ?Sized>(
    rng: &mut R,
    v: usize,
    p: usize,
    q: usize,
    degree: usize,
    order: usize,
) -> Result<LeechInstance> {
    if v > p || degree == 0 {
        return Err(Error::DimensionMismatch("random Leech data needs v ≤ p and degree ≥ 1"));
    }
    loop {
        let mut g: Vec<CMatrix> = (0..degree).map(|_| random_matrix(rng, v, p)).collect();
        // a dominant constant term keeps T_G T_G* well away from singular
        g[0] += identity(v).resize(v, p, c64(0.0, 0.0)) * c64(2.0, 0.0);
        let mut k: Vec<CMatrix> = (0..degree).map(|_| random_matrix(rng, v, q)).collect();
        for _ in 0..200 {
            let leech = LeechInstance::new(g.clone(), k.clone(), order)?;
            let pick = gramians(&leech_truncate(&leech)?, STEIN_TOL)?;
            if min_hermitian_eigenvalue(&pick.lambda)? >= LAMBDA_FLOOR {
                return Ok(leech);
            }
            for kk in k.iter_mut() {
                *kk *= c64(SHRINK, 0.0);
            }
        }
    }
}
