use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::geometry::Ray;
use crate::{Error, Mat, Result};

/// Left-point multiplicative integral of `f` along the ray.
///
/// `t` is arc length from the ray's base point; the grid `t_min + k·delta` is
/// anchored at `t_min` and the last step is shortened to end at `t_max`.
pub fn continuous_xray_numeric<E>(evaluator: E, ray: &Ray, delta: f64, t_min: f64, t_max: f64) -> Result<Mat>
where
    E: Fn(&[f64]) -> Mat,
{
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::domain("step must be positive and finite"));
    }
    if t_min.is_nan() || t_max.is_nan() || t_max < t_min {
        return Err(Error::domain("empty parameter interval"));
    }
    let base = ray.base_f64();
    let unit = ray.unit_dir();
    let point = |t: f64| -> alloc::vec::Vec<f64> { base.iter().zip(&unit).map(|(b, u)| b + t * u).collect() };

    let mut acc = Mat::identity(evaluator(&point(t_min)).n());
    let steps = libm::ceil((t_max - t_min) / delta) as u64;
    for k in 0..steps {
        let t = t_min + k as f64 * delta;
        let h = delta.min(t_max - t);
        if h <= 0.0 {
            break;
        }
        let f = evaluator(&point(t));
        if f.is_zero() {
            continue;
        }
        acc = &f.scale_real(h).exp() * &acc;
    }
    Ok(acc)
}

/// Per-step factors `(exp(−aΔ), (exp(−aΔ) − 1)/a)` for the attenuated transform,
/// with the removable singularity at `a = 0` filled in as `−Δ`.
pub fn attenuation_cell_factors(a: Complex64, delta: f64) -> (Complex64, Complex64) {
    let x = a * delta;
    let w1 = (-x).exp();
    let w2 = if x.norm() < 0.5 {
        // (e^{−x} − 1)/a = −Δ Σ_k (−x)^k / (k+1)!
        let mut term = Complex64::one();
        let mut sum = Complex64::zero();
        let mut k = 1.0;
        while term.norm() > 1e-18 {
            sum += term;
            k += 1.0;
            term = term * (-x) / k;
        }
        -sum * delta
    } else {
        (w1 - Complex64::one()) / a
    };
    (w1, w2)
}

/// The 2×2 step factor `[[w1, w2·u], [0, 1]]`.
pub fn attenuation_step_matrix(a: Complex64, u: Complex64, delta: f64) -> Mat {
    let (w1, w2) = attenuation_cell_factors(a, delta);
    let mut m = Mat::identity(2);
    m.set(0, 0, w1);
    m.set(0, 1, w2 * u);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rational, LatticePoint};
    use alloc::vec;

    #[test]
    fn zero_evaluator_gives_identity() {
        let ray = Ray::through(&LatticePoint::origin(2), vec![1, 0]).unwrap();
        let m = continuous_xray_numeric(|_| Mat::zeros(2), &ray, 0.1, -3.0, 3.0).unwrap();
        assert_eq!(m, Mat::identity(2));
    }

    #[test]
    fn constant_on_a_segment() {
        let ray = Ray::new(vec![rational(0, 1), rational(1, 3)], vec![1, 0]).unwrap();
        let a = Complex64::new(0.7, 0.1);
        let f = |x: &[f64]| {
            if x[0].abs() < 1.0 {
                Mat::scalar(a)
            } else {
                Mat::scalar(Complex64::zero())
            }
        };
        let exact = (a * 2.0).exp();
        let coarse = continuous_xray_numeric(f, &ray, 1e-2, -3.0, 3.0).unwrap().get(0, 0);
        let fine = continuous_xray_numeric(f, &ray, 1e-3, -3.0, 3.0).unwrap().get(0, 0);
        assert!((fine - exact).norm() < (coarse - exact).norm() + 1e-12);
        assert!((fine - exact).norm() < 1e-2);
    }

    #[test]
    fn attenuation_limits() {
        let (w1, w2) = attenuation_cell_factors(Complex64::zero(), 0.3);
        assert_eq!(w1, Complex64::one());
        assert!((w2 + 0.3).norm() < 1e-16);
        let (w1, w2) = attenuation_cell_factors(Complex64::one(), 1.0);
        let e = (-1.0f64).exp();
        assert!((w1.re - e).abs() < 1e-15 && (w2.re - (e - 1.0)).abs() < 1e-15);
        // Series and closed form agree near the switch-over.
        let a = Complex64::new(0.49, 0.0);
        let (_, s) = attenuation_cell_factors(a, 1.0);
        assert!((s - ((-a).exp() - 1.0) / a).norm() < 1e-15);
    }

    #[test]
    fn step_matrix_is_exponential_of_generator() {
        let a = Complex64::new(0.4, -0.3);
        let u = Complex64::new(1.5, 0.2);
        let delta = 0.7;
        let step = attenuation_step_matrix(a, u, delta);
        let mut gen = Mat::zeros(2);
        gen.set(0, 0, -a);
        gen.set(0, 1, -u);
        assert!(gen.scale_real(delta).exp().dist(&step) < 1e-14);
        // With +u in the generator the off-diagonal entry flips sign.
        gen.set(0, 1, u);
        let flipped = gen.scale_real(delta).exp();
        assert!((flipped.get(0, 1) + step.get(0, 1)).norm() < 1e-14);
    }
}
