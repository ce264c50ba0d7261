//! Numerical octonionic operator algebra on `O^n`.
//!
//! The crate builds up, layer by layer: exact-convention octonion arithmetic
//! and standard orthonormal frames ([`octonion`], [`frame`]); the bimodule
//! `O^n` with its real part and slice projections ([`bimodule`]); right
//! para-linear operators in octonionic-matrix canonical form together with
//! the lifting/extension bijections, regular composition, regular powers and
//! regular inverses ([`paralin`]); resolvent series and pull-back /
//! push-forward slice spectra ([`spectra`]); slice regular functions, slice
//! products and Cauchy kernels ([`slicefun`]); and the left and right slice
//! regular functional calculi by contour quadrature ([`funcalc`]).
//!
//! File formats consumed and produced by the companion CLI live in [`io`].

pub mod bimodule;
pub mod error;
pub mod frame;
pub mod funcalc;
pub mod io;
pub mod octonion;
pub mod paralin;
pub mod slicefun;
pub mod spectra;

pub use bimodule::{OctVector, RealFunctional, RealVector};
pub use error::{Error, Result};
pub use frame::SliceFrame;
pub use octonion::Octonion;
pub use paralin::{OctMatrix, RealOpMatrix, Side};
