//! Operator-algebraic thermodynamics of quantum channels at finite dimension.
//!
//! The crate works with von Neumann algebras that are finite direct sums of
//! full complex matrix blocks ("multi-matrix algebras"), faithful normal
//! states on them, and unital completely positive maps between them. On top
//! of that it builds the standard form `L²(M)`, relative modular operators
//! and Connes cocycles, the GNS bimodule of a channel, Jones/minimal index
//! data, and the thermodynamic quantities of a channel: modular operator,
//! entropy, physical Hamiltonian, mean energy and incremental free energy,
//! together with Landauer-bound verdicts.
//!
//! All core math is generic over the real scalar type (`f32` or `f64`)
//! through [`Real`]; concrete `f64` aliases live at the crate root and are
//! what the CLI and the verification suites use.

pub mod algebra;
pub mod bimodule;
pub mod channel;
pub mod error;
pub mod index;
pub mod modular;
pub mod numerics;
pub mod thermo;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::Real;

/// Complex scalar over a generic real field.
pub type C<R> = num_complex::Complex<R>;
/// Dense complex matrix over a generic real field.
pub type CMat<R> = nalgebra::DMatrix<num_complex::Complex<R>>;
/// Dense complex vector over a generic real field.
pub type CVec<R> = nalgebra::DVector<num_complex::Complex<R>>;
/// Dense real matrix.
pub type RMat<R> = nalgebra::DMatrix<R>;
/// Dense real vector.
pub type RVec<R> = nalgebra::DVector<R>;

/// Default-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
/// Default-precision complex matrix.
pub type CMat64 = CMat<f64>;
/// Default-precision complex vector.
pub type CVec64 = CVec<f64>;
/// Default-precision real matrix.
pub type RMat64 = RMat<f64>;
/// Default-precision real vector.
pub type RVec64 = RVec<f64>;
