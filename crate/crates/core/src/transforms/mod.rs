//! Forward transforms.
//!
//! Every ordered product here follows one convention: factors are visited in
//! increasing ray parameter and each new factor multiplies on the left, so the
//! last point crossed ends up leftmost.

mod delta;
mod discrete;
mod numeric;
mod star;

pub use delta::{continuous_xray_delta, lift_delta_field, DeltaFieldSpec};
pub use discrete::{
    build_f_theta, discrete_scalar_xray, discrete_xray, factorize_weight, induced_weight, weighted_xray, InducedWeight,
    RayWeight,
};
pub use numeric::{attenuation_cell_factors, attenuation_step_matrix, continuous_xray_numeric};
pub use star::{piecewise_constant_value, star_split, star_transform};
