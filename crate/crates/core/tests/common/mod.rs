#![allow(dead_code)]

use naxray_core::geometry::{ball_lattice_points, rational_to_f64, LatticePoint, Rational};
use naxray_core::{Ball, Complex64, LatticeField, Mat, Ray, Regime};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pt(c: &[i64]) -> LatticePoint {
    LatticePoint(c.to_vec())
}

pub fn complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_mat(rng: &mut impl Rng, n: usize) -> Mat {
    Mat::new(n, (0..n * n).map(|_| complex(rng)).collect()).unwrap()
}

/// `I + 0.3 G`, resampled until comfortably invertible.
pub fn random_gl(rng: &mut impl Rng, n: usize) -> Mat {
    loop {
        let m = &Mat::identity(n) + &random_mat(rng, n).scale_real(0.3);
        if m.det().norm() > 0.1 {
            return m;
        }
    }
}

pub fn random_gl_field(rng: &mut impl Rng, d: usize, n: usize, r: f64) -> LatticeField {
    let ball = Ball::new(r).unwrap();
    let values = ball_lattice_points(&ball, d).into_iter().map(|z| (z, random_gl(rng, n)));
    LatticeField::from_values(d, n, r, Regime::Multiplicative, values).unwrap()
}

/// Values with Frobenius norm at most `m`.
pub fn random_bounded_field(rng: &mut impl Rng, d: usize, n: usize, r: f64, m: f64) -> LatticeField {
    let ball = Ball::new(r).unwrap();
    let values = ball_lattice_points(&ball, d).into_iter().map(|z| {
        let g = random_mat(rng, n);
        let scale = rng.gen_range(0.05..1.0) * m / g.frobenius_norm();
        (z, g.scale_real(scale))
    });
    LatticeField::from_values(d, n, r, Regime::Additive, values).unwrap()
}

pub fn random_scalar_field(rng: &mut impl Rng, d: usize, r: f64, regime: Regime, lo: f64, hi: f64) -> LatticeField {
    let ball = Ball::new(r).unwrap();
    let values = ball_lattice_points(&ball, d)
        .into_iter()
        .map(|z| (z, Complex64::new(rng.gen_range(lo..hi), rng.gen_range(lo..hi))));
    LatticeField::scalar(d, r, regime, values).unwrap()
}

/// Lattice points of the ball on the ray, found by testing every point for
/// collinearity and sorting by the projection parameter.
pub fn brute_points_on_ray(ray: &Ray, ball: &Ball) -> Vec<LatticePoint> {
    let mut hits: Vec<(Rational, LatticePoint)> = ball_lattice_points(ball, ray.dim())
        .into_iter()
        .filter(|z| ray.dist_sq(&z.to_rational()).is_zero())
        .map(|z| (ray.project(&z.to_rational()), z))
        .collect();
    hits.sort();
    hits.into_iter().map(|(_, z)| z).collect()
}

pub fn brute_discrete_xray(field: &LatticeField, ray: &Ray) -> Mat {
    brute_points_on_ray(ray, field.ball()).iter().fold(Mat::identity(field.n()), |acc, y| &field.value_at(y) * &acc)
}

/// Chord lengths through the closed cells of the ball by floating-point slab
/// clipping, ordered along the ray. Only valid for rays in general position.
pub fn float_chords(ray: &Ray, ball: &Ball) -> Vec<(LatticePoint, f64)> {
    let base: Vec<f64> = ray.base().iter().map(rational_to_f64).collect();
    let dir = ray.unit_dir();
    let mut out = Vec::new();
    for z in ball_lattice_points(ball, ray.dim()) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for k in 0..ray.dim() {
            let (a, b) = (z.0[k] as f64 - 0.5, z.0[k] as f64 + 0.5);
            if dir[k] == 0.0 {
                if base[k] < a || base[k] >= b {
                    hi = f64::NEG_INFINITY;
                }
                continue;
            }
            let (t1, t2) = ((a - base[k]) / dir[k], (b - base[k]) / dir[k]);
            lo = lo.max(t1.min(t2));
            hi = hi.min(t1.max(t2));
        }
        if hi - lo > 1e-12 {
            out.push((lo, z, hi - lo));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out.into_iter().map(|(_, z, l)| (z, l)).collect()
}

pub fn float_star_transform(f: &LatticeField, ray: &Ray) -> Mat {
    float_chords(ray, f.ball())
        .iter()
        .fold(Mat::identity(f.n()), |acc, (z, len)| &f.value_at(z).scale_real(*len).exp() * &acc)
}
