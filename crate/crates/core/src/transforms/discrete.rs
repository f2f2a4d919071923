use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::geometry::{ball_lattice_points, primitive_direction, ray_lattice_points, Ball, LatticePoint, Ray};
use crate::{Error, LatticeField, Mat, Regime, Result};

fn check_ray(field: &LatticeField, ray: &Ray) -> Result<()> {
    if ray.dim() != field.d() {
        return Err(Error::invalid(format!("ray has dimension {}, field has dimension {}", ray.dim(), field.d())));
    }
    Ok(())
}

/// Discrete non-abelian transform `F(y_k) ··· F(y_1)` over `γ ∩ Z^d`.
pub fn discrete_xray(field: &LatticeField, ray: &Ray) -> Result<Mat> {
    if field.regime() != Regime::Multiplicative {
        return Err(Error::invalid("discrete transform needs a multiplicative field"));
    }
    check_ray(field, ray)?;
    let mut acc = Mat::identity(field.n());
    for y in ray_lattice_points(ray, field.ball()) {
        if let Some(f) = field.get(&y) {
            acc = f * &acc;
        }
    }
    Ok(acc)
}

/// Classical discrete transform: the sum of a scalar field over `γ ∩ Z^d`.
pub fn discrete_scalar_xray(f: &LatticeField, ray: &Ray) -> Result<Complex64> {
    if f.n() != 1 || f.regime() != Regime::Additive {
        return Err(Error::invalid("scalar transform needs an additive field with n = 1"));
    }
    check_ray(f, ray)?;
    Ok(ray_lattice_points(ray, f.ball()).iter().map(|y| f.scalar_at(y)).sum())
}

/// A weight `W(y, γ̂)` on lattice points and (primitive integer) directions.
pub trait RayWeight {
    fn weight(&self, y: &LatticePoint, dir: &[i64]) -> Complex64;
}

impl<F> RayWeight for F
where
    F: Fn(&LatticePoint, &[i64]) -> Complex64,
{
    fn weight(&self, y: &LatticePoint, dir: &[i64]) -> Complex64 {
        self(y, dir)
    }
}

/// `Σ_{y ∈ γ ∩ Z^d} W(y, γ̂) u(y)`.
pub fn weighted_xray<W: RayWeight + ?Sized>(weight: &W, u: &LatticeField, ray: &Ray) -> Result<Complex64> {
    if u.n() != 1 || u.regime() != Regime::Additive {
        return Err(Error::invalid("weighted transform needs an additive field with n = 1"));
    }
    check_ray(u, ray)?;
    Ok(ray_lattice_points(ray, u.ball())
        .iter()
        .filter_map(|y| u.get(y).map(|v| weight.weight(y, ray.dir()) * v.get(0, 0)))
        .sum())
}

fn check_weight_fields(w1: &LatticeField, w2: &LatticeField) -> Result<()> {
    for (name, w) in [("w1", w1), ("w2", w2)] {
        if w.n() != 1 || w.regime() != Regime::Multiplicative {
            return Err(Error::invalid(format!("{name} must be a scalar multiplicative field")));
        }
        if let Some((z, _)) = w.iter().find(|(_, v)| v.get(0, 0).is_zero()) {
            return Err(Error::domain(format!("{name} vanishes at {z}")));
        }
    }
    if w1.d() != w2.d() {
        return Err(Error::invalid("w1 and w2 live in different dimensions"));
    }
    Ok(())
}

/// The triangular field `z ↦ [[w1(z), w2(z) u(z)], [0, 1]]`.
pub fn build_f_theta(w1: &LatticeField, w2: &LatticeField, u: &LatticeField) -> Result<LatticeField> {
    check_weight_fields(w1, w2)?;
    if u.n() != 1 || u.regime() != Regime::Additive || u.d() != w1.d() {
        return Err(Error::invalid("u must be a scalar additive field of matching dimension"));
    }
    let r = w1.r().max(w2.r()).max(u.r());
    let support: BTreeSet<&LatticePoint> = w1.iter().chain(w2.iter()).chain(u.iter()).map(|(z, _)| z).collect();
    let one = Complex64::one();
    let values = support.into_iter().map(|z| {
        let mut m = Mat::identity(2);
        m.set(0, 0, w1.scalar_at(z));
        m.set(0, 1, w2.scalar_at(z) * u.scalar_at(z));
        m.set(1, 1, one);
        (z.clone(), m)
    });
    LatticeField::from_values(w1.d(), 2, r, Regime::Multiplicative, values)
}

/// The weight induced by `(w1, w2)` for rays with direction `θ`:
/// `W(y) = w2(y) · Π w1(ζ)` over lattice points `ζ` strictly after `y`.
#[derive(Clone, Debug)]
pub struct InducedWeight {
    w1: LatticeField,
    w2: LatticeField,
    theta: Vec<i64>,
}

pub fn induced_weight(w1: &LatticeField, w2: &LatticeField, theta: &[i64]) -> Result<InducedWeight> {
    check_weight_fields(w1, w2)?;
    if theta.len() != w1.d() {
        return Err(Error::invalid("direction dimension does not match the fields"));
    }
    Ok(InducedWeight { w1: w1.clone(), w2: w2.clone(), theta: primitive_direction(theta)? })
}

impl InducedWeight {
    pub fn theta(&self) -> &[i64] {
        &self.theta
    }

    pub fn at(&self, y: &LatticePoint) -> Complex64 {
        let mut w = self.w2.scalar_at(y);
        // w1 is 1 off its ball; stop once the line has left it for good.
        let mut k = 1;
        loop {
            let z = y.offset(&self.theta, k);
            let outward: i64 = z.coords().iter().zip(&self.theta).map(|(a, b)| a * b).sum();
            if !self.w1.ball().contains(&z) && outward >= 0 {
                break;
            }
            w *= self.w1.scalar_at(&z);
            k += 1;
        }
        w
    }
}

impl RayWeight for InducedWeight {
    fn weight(&self, y: &LatticePoint, _dir: &[i64]) -> Complex64 {
        self.at(y)
    }
}

/// Splits a nonvanishing weight `W(·, θ)` into `(w1, w2)` with `w2 ≡ 1` off
/// the shadow set, so that [`induced_weight`] reproduces `W` on `B_r ∩ Z^d`.
///
/// Along each line `y_1, …, y_n` (increasing in `θ`): `w2(y_n) = W(y_n)`,
/// `w1(y_n) = W(y_{n−1})`, `w1(y_k) = W(y_{k−1}) / W(y_k)` for `1 < k < n`,
/// and the free value `w1(y_1)` is set to 1.
pub fn factorize_weight<W: RayWeight + ?Sized>(
    weight: &W,
    theta: &[i64],
    ball: &Ball,
    d: usize,
) -> Result<(LatticeField, LatticeField)> {
    let p = primitive_direction(theta)?;
    if p.len() != d {
        return Err(Error::invalid("direction dimension does not match d"));
    }
    let r = ball.radius();
    let mut w1 = LatticeField::new(d, 1, r, Regime::Multiplicative)?;
    let mut w2 = LatticeField::new(d, 1, r, Regime::Multiplicative)?;
    let mut done = BTreeSet::new();
    for z in ball_lattice_points(ball, d) {
        if done.contains(&z) {
            continue;
        }
        let mut first = z.clone();
        while ball.contains(&first.offset(&p, -1)) {
            first = first.offset(&p, -1);
        }
        let mut line = Vec::new();
        let mut cur = first;
        while ball.contains(&cur) {
            line.push(cur.clone());
            cur = cur.offset(&p, 1);
        }
        let values: Vec<Complex64> = line.iter().map(|y| weight.weight(y, &p)).collect();
        if let Some(k) = values.iter().position(|v| v.is_zero()) {
            return Err(Error::domain(format!("weight vanishes at {}", line[k])));
        }
        let last = line.len() - 1;
        for (k, y) in line.iter().enumerate() {
            let w1_val = if k == 0 {
                Complex64::one()
            } else if k == last {
                values[k - 1]
            } else {
                values[k - 1] / values[k]
            };
            let w2_val = if k == last { values[k] } else { Complex64::one() };
            w1.insert(y.clone(), Mat::scalar(w1_val))?;
            w2.insert(y.clone(), Mat::scalar(w2_val))?;
            done.insert(y.clone());
        }
    }
    Ok((w1, w2))
}
