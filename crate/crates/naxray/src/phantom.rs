//! Seeded hidden fields for synthetic round trips.

use naxray_core::geometry::ball_lattice_points;
use naxray_core::{Ball, Complex64, LatticeField, Mat, Regime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::CliResult;

const MIN_DET: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhantomSpec {
    pub d: usize,
    pub n: usize,
    pub r: f64,
    pub regime: Regime,
    /// Norm bound for additive fields.
    pub m_bound: f64,
    pub seed: u64,
}

/// `n×n` matrix of independent standard complex Gaussians.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Mat {
    let data = (0..n * n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect();
    Mat::new(n, data).expect("square by construction")
}

/// `I + 0.3 G`, redrawn until `|det| ≥ 0.1`.
pub fn well_conditioned<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Mat {
    loop {
        let m = &Mat::identity(n) + &complex_gaussian(rng, n).scale_real(0.3);
        if m.det().norm() >= MIN_DET {
            return m;
        }
    }
}

/// `0.5 M G / ‖G‖_F`, so every value has norm `M / 2`.
pub fn bounded<R: Rng + ?Sized>(rng: &mut R, n: usize, m_bound: f64) -> Mat {
    loop {
        let g = complex_gaussian(rng, n);
        let norm = g.frobenius_norm();
        if norm > 0.0 {
            return g.scale_real(0.5 * m_bound / norm);
        }
    }
}

/// One value per lattice point of the ball, drawn in lexicographic order.
pub fn phantom(spec: &PhantomSpec) -> CliResult<LatticeField> {
    let ball = Ball::new(spec.r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut field = LatticeField::new(spec.d, spec.n, spec.r, spec.regime)?;
    for z in ball_lattice_points(&ball, spec.d) {
        let value = match spec.regime {
            Regime::Multiplicative => well_conditioned(&mut rng, spec.n),
            Regime::Additive => bounded(&mut rng, spec.n, spec.m_bound),
        };
        field.insert(z, value)?;
    }
    match spec.regime {
        Regime::Multiplicative => Ok(field),
        Regime::Additive => Ok(field.with_bound(spec.m_bound)?),
    }
}
