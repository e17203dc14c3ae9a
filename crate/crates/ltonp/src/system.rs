//! State-space realizations `G(λ) = δ + λ·γ·(I − λα)⁻¹·β`.

use crate::error::{Error, Result};
use crate::kernel::{self, block2, c64, hstack, identity, lu_solve, vstack, CMatrix, C64};
use alloc::vec::Vec;

/// Slack allowed when declaring a system matrix contractive.
pub const CONTRACTIVE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RationalSystem {
    pub alpha: CMatrix,
    pub beta: CMatrix,
    pub gamma: CMatrix,
    pub delta: CMatrix,
    /// `‖[δ γ; β α]‖ ≤ 1 + CONTRACTIVE_SLACK`.
    pub contractive_system_matrix: bool,
    pub spectral_radius_alpha: f64,
}

impl RationalSystem {
    pub fn new(alpha: CMatrix, beta: CMatrix, gamma: CMatrix, delta: CMatrix) -> Result<Self> {
        let m = alpha.nrows();
        if !alpha.is_square()
            || beta.nrows() != m
            || gamma.ncols() != m
            || delta.nrows() != gamma.nrows()
            || delta.ncols() != beta.ncols()
        {
            return Err(Error::DimensionMismatch("realization blocks"));
        }
        for (name, x) in [("alpha", &alpha), ("beta", &beta), ("gamma", &gamma), ("delta", &delta)] {
            if !kernel::is_finite(x) {
                return Err(Error::NonFinite(name));
            }
        }
        let spectral_radius_alpha = kernel::spectral_radius(&alpha)?;
        let norm = kernel::operator_norm(&block2(&delta, &gamma, &beta, &alpha));
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
            contractive_system_matrix: norm <= 1.0 + CONTRACTIVE_SLACK,
            spectral_radius_alpha,
        })
    }

    /// Constant function with an empty state space.
    pub fn constant(delta: CMatrix) -> Self {
        let (y, u) = delta.shape();
        Self::new(CMatrix::zeros(0, 0), CMatrix::zeros(0, u), CMatrix::zeros(y, 0), delta)
            .expect("constant realization is well formed")
    }

    pub fn state_dim(&self) -> usize {
        self.alpha.nrows()
    }

    pub fn input_dim(&self) -> usize {
        self.delta.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.delta.nrows()
    }

    /// `[δ γ; β α]`.
    pub fn system_matrix(&self) -> CMatrix {
        block2(&self.delta, &self.gamma, &self.beta, &self.alpha)
    }

    pub fn eval(&self, lambda: C64) -> Result<CMatrix> {
        if self.state_dim() == 0 {
            return Ok(self.delta.clone());
        }
        let m = self.state_dim();
        let res = identity(m) - &self.alpha * lambda;
        let x = lu_solve(&res, &self.beta).ok_or(Error::ResolventSingular)?;
        Ok(&self.delta + &self.gamma * x * lambda)
    }

    /// Taylor coefficients `F_0 = δ`, `F_k = γ·α^{k−1}·β`.
    pub fn taylor_coefficients(&self, count: usize) -> Vec<CMatrix> {
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return out;
        }
        out.push(self.delta.clone());
        let mut state = self.beta.clone();
        for _ in 1..count {
            out.push(&self.gamma * &state);
            state = &self.alpha * state;
        }
        out
    }

    /// Realization of `self(λ)·other(λ)`.
    pub fn series(&self, other: &RationalSystem) -> Result<RationalSystem> {
        if self.input_dim() != other.output_dim() {
            return Err(Error::DimensionMismatch("series interconnection"));
        }
        let (m1, m2) = (self.state_dim(), other.state_dim());
        let alpha = block2(
            &self.alpha,
            &(&self.beta * &other.gamma),
            &CMatrix::zeros(m2, m1),
            &other.alpha,
        );
        let beta = vstack(&[&(&self.beta * &other.delta), &other.beta]);
        let gamma = hstack(&[&self.gamma, &(&self.delta * &other.gamma)]);
        RationalSystem::new(alpha, beta, gamma, &self.delta * &other.delta)
    }

    /// Scalar multiple `c·G`.
    pub fn scaled(&self, c: f64) -> RationalSystem {
        let mut out = self.clone();
        out.gamma *= c64(c, 0.0);
        out.delta *= c64(c, 0.0);
        out.contractive_system_matrix =
            kernel::operator_norm(&out.system_matrix()) <= 1.0 + CONTRACTIVE_SLACK;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::from_real;

    #[test]
    fn identity_function_lambda() {
        // G(λ) = λ via {α = 0, β = 1, γ = 1, δ = 0}
        let g = RationalSystem::new(
            from_real(1, 1, &[0.0]),
            from_real(1, 1, &[1.0]),
            from_real(1, 1, &[1.0]),
            from_real(1, 1, &[0.0]),
        )
        .unwrap();
        assert!(g.contractive_system_matrix);
        let l = c64(0.3, -0.4);
        assert!((g.eval(l).unwrap()[(0, 0)] - l).norm() < 1e-15);
        let t = g.taylor_coefficients(3);
        assert_eq!(t[1][(0, 0)], c64(1.0, 0.0));
        assert_eq!(t[2][(0, 0)], c64(0.0, 0.0));
    }

    #[test]
    fn series_multiplies_values() {
        let a = RationalSystem::new(
            from_real(1, 1, &[0.5]),
            from_real(1, 2, &[1.0, 0.2]),
            from_real(1, 1, &[0.3]),
            from_real(1, 2, &[0.1, 0.4]),
        )
        .unwrap();
        let b = RationalSystem::new(
            from_real(2, 2, &[0.1, 0.2, 0.0, -0.3]),
            from_real(2, 1, &[1.0, 1.0]),
            from_real(2, 2, &[0.5, 0.0, 0.2, 0.7]),
            from_real(2, 1, &[0.3, -0.2]),
        )
        .unwrap();
        let ab = a.series(&b).unwrap();
        for &l in &[c64(0.0, 0.0), c64(0.5, 0.2), c64(-0.3, 0.9)] {
            let lhs = ab.eval(l).unwrap();
            let rhs = a.eval(l).unwrap() * b.eval(l).unwrap();
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }
}
