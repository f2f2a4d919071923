//! Exact, non-overdetermined inversions.
//!
//! Each procedure reads one measurement per unknown lattice value from a
//! [`Measurements`](crate::Measurements) provider and reports how many it used.

mod counterexample;
mod irrational;
mod layers;
mod star;

pub use counterexample::{counterexample, Counterexample};
pub use irrational::{irrational_rays, reconstruct_irrational};
pub use layers::{layer_rays, reconstruct_layers_discrete, Annulus};
pub use star::{reconstruct_star, LogMode, StarOptions};

use crate::LatticeField;

#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub field: LatticeField,
    /// Number of rays read from the provider.
    pub measurements: usize,
    /// Number of inductive steps (largest over slices).
    pub layers: usize,
}
