//! Left-tangential operator Nevanlinna-Pick interpolation in finite dimensions.
//!
//! Given a stable state operator `Z` and tangential data `B`, `B̃`, the crate
//! computes the Pick operator, a complementary pair `(C, D)`, the coefficient
//! function `Υ`, the central (maximum entropy) solution and the linear
//! fractional parametrization of all Schur class solutions. Solutions are
//! carried as exact state-space realizations, so every identity can be
//! checked without quadrature.
//!
//! ```
//! use ltonp::{kernel::CMatrix, problem::{gramians, ProblemData}, solver::central_solution};
//! use num_complex::Complex64;
//!
//! let z = CMatrix::zeros(1, 1);
//! let b = CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
//! let bt = CMatrix::from_element(1, 1, Complex64::new(0.5, 0.0));
//! let prob = ProblemData::new(z, b, bt).unwrap();
//! let pick = gramians(&prob, 1e-14).unwrap();
//! let f = central_solution(&prob, &pick).unwrap();
//! let v = f.eval(Complex64::new(0.3, 0.2)).unwrap();
//! assert!((v[(0, 0)].re - 0.5).abs() < 1e-14);
//! ```
#![no_std]

extern crate alloc;

pub mod complementary;
pub mod error;
pub mod fronts;
pub mod kernel;
pub mod problem;
pub mod sample;
pub mod solver;
pub mod system;
pub mod verify;

pub use error::{Error, Result};
pub use kernel::{CMatrix, C64};
pub use system::RationalSystem;
