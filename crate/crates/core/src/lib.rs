//! Non-abelian X-ray transforms of matrix-valued fields on the integer lattice.
//!
//! The crate covers three layers:
//!
//! - [`matrix`]: small dense complex matrices with exponential, series logarithm
//!   and pivoted inverse.
//! - [`geometry`]: exact rational geometry of oriented lines against `Z^d` and
//!   against the half-open unit cells around each lattice point, including the
//!   ray family used by the piecewise-constant reconstruction.
//! - [`transforms`] and [`reconstruction`]: the forward transforms (discrete,
//!   weighted, regularized-delta, cell-chord) and the exact, non-overdetermined
//!   inversions that consume one measurement per unknown lattice value.
//!
//! Everything here is `no_std` with `alloc`. File formats, phantoms and the
//! command-line front end live in the `naxray` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod field;
pub mod geometry;
pub mod matrix;
pub mod reconstruction;
pub mod sinogram;
pub mod transforms;

pub use error::Error;
pub use field::{LatticeField, Regime};
pub use geometry::{Ball, CellChord, GammaRPlan, LatticePoint, PlanEntry, Rational, Ray};
pub use matrix::Mat;
pub use num_complex::Complex64;
pub use sinogram::{Measurements, Sinogram, SinogramMeta, Synthetic, TransformKind};

pub type Result<T, E = Error> = core::result::Result<T, E>;
