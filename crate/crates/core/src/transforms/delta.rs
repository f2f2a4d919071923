use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::geometry::{rational_from_f64, rational_to_f64, LatticePoint, Rational, Ray};
use crate::{Error, LatticeField, Mat, Regime, Result};

/// `f(x) = Σ_z w(z) f(z) χ(|x − z| ≤ ρ_z)`: lattice values smeared over small
/// disjoint balls.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaFieldSpec {
    base: LatticeField,
    w: BTreeMap<LatticePoint, f64>,
    rho: BTreeMap<LatticePoint, f64>,
}

impl DeltaFieldSpec {
    /// Every support point of `base` needs a weight and a radius; the closed
    /// balls must be pairwise disjoint.
    pub fn new(base: LatticeField, w: BTreeMap<LatticePoint, f64>, rho: BTreeMap<LatticePoint, f64>) -> Result<Self> {
        if base.regime() != Regime::Additive {
            return Err(Error::invalid("delta field values must be an additive field"));
        }
        for (z, _) in base.iter() {
            for (name, map) in [("weight", &w), ("radius", &rho)] {
                match map.get(z) {
                    Some(v) if *v > 0.0 && v.is_finite() => {}
                    Some(v) => return Err(Error::domain(format!("{name} at {z} must be positive, got {v}"))),
                    None => return Err(Error::invalid(format!("no {name} given for support point {z}"))),
                }
            }
        }
        let support: Vec<&LatticePoint> = base.iter().map(|(z, _)| z).collect();
        for (i, a) in support.iter().enumerate() {
            for b in &support[i + 1..] {
                let gap_sq: i64 = a.coords().iter().zip(b.coords()).map(|(x, y)| (x - y) * (x - y)).sum();
                let reach = rho[*a] + rho[*b];
                if (gap_sq as f64) <= reach * reach {
                    return Err(Error::domain(format!("balls around {a} and {b} overlap")));
                }
            }
        }
        Ok(DeltaFieldSpec { base, w, rho })
    }

    /// Same weight and radius at every support point.
    pub fn uniform(base: LatticeField, w: f64, rho: f64) -> Result<Self> {
        let points: Vec<LatticePoint> = base.iter().map(|(z, _)| z.clone()).collect();
        let ws = points.iter().map(|z| (z.clone(), w)).collect();
        let rhos = points.into_iter().map(|z| (z, rho)).collect();
        Self::new(base, ws, rhos)
    }

    pub fn base(&self) -> &LatticeField {
        &self.base
    }

    pub fn weight(&self, z: &LatticePoint) -> Option<f64> {
        self.w.get(z).copied()
    }

    pub fn radius(&self, z: &LatticePoint) -> Option<f64> {
        self.rho.get(z).copied()
    }

    /// Pointwise value of the smeared field.
    pub fn value_at(&self, x: &[f64]) -> Mat {
        for (z, f) in self.base.iter() {
            let rho = self.rho[z];
            let dist_sq: f64 = z.coords().iter().zip(x).map(|(&c, &p)| (p - c as f64) * (p - c as f64)).sum();
            if dist_sq <= rho * rho {
                return f.scale_real(self.w[z]);
            }
        }
        Mat::zeros(self.base.n())
    }
}

/// `F(z) = exp(2 ρ_z w(z) f(z))` on the support, identity elsewhere.
pub fn lift_delta_field(spec: &DeltaFieldSpec) -> LatticeField {
    let base = &spec.base;
    let values = base.iter().map(|(z, f)| (z.clone(), f.scale_real(2.0 * spec.rho[z] * spec.w[z]).exp()));
    LatticeField::from_values(base.d(), base.n(), base.r(), Regime::Multiplicative, values)
        .expect("matrix exponentials are invertible")
}

/// Continuous transform of the smeared field along a ray that either passes
/// through each support point or misses its ball entirely.
pub fn continuous_xray_delta(spec: &DeltaFieldSpec, ray: &Ray) -> Result<Mat> {
    if ray.dim() != spec.base.d() {
        return Err(Error::invalid("ray dimension does not match the field"));
    }
    let mut crossings: Vec<(Rational, f64, &Mat, &LatticePoint)> = Vec::new();
    for (z, f) in spec.base.iter() {
        let p = z.to_rational();
        let dist_sq = ray.dist_sq(&p);
        let rho = spec.rho[z];
        let rho_q = rational_from_f64(rho)?;
        let rho_sq = &rho_q * &rho_q;
        if dist_sq > rho_sq {
            continue;
        }
        if dist_sq != Rational::from_integer(0.into()) {
            return Err(Error::NotInTDoublePrime(format!("ray {ray} cuts the ball around {z} off-center")));
        }
        let chord = 2.0 * libm::sqrt((rho * rho - rational_to_f64(&dist_sq)).max(0.0));
        crossings.push((ray.project(&p), chord, f, z));
    }
    crossings.sort_by(|a, b| a.0.cmp(&b.0));
    let mut acc = Mat::identity(spec.base.n());
    for (_, chord, f, z) in crossings {
        acc = &f.scale_real(spec.w[z] * chord).exp() * &acc;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational;
    use crate::transforms::discrete_xray;
    use crate::Complex64;
    use alloc::vec;

    fn pt(c: &[i64]) -> LatticePoint {
        LatticePoint(c.to_vec())
    }

    fn spec_with(values: Vec<(LatticePoint, Mat)>, n: usize, rho: f64) -> DeltaFieldSpec {
        let base = LatticeField::from_values(2, n, 3.0, Regime::Additive, values).unwrap();
        DeltaFieldSpec::uniform(base, 1.0, rho).unwrap()
    }

    #[test]
    fn zero_field_lifts_to_identity() {
        let spec = spec_with(vec![], 2, 0.2);
        assert!(lift_delta_field(&spec).is_empty());
        let ray = Ray::through(&pt(&[0, 0]), vec![1, 0]).unwrap();
        assert_eq!(continuous_xray_delta(&spec, &ray).unwrap(), Mat::identity(2));
    }

    #[test]
    fn scalar_lift() {
        let spec = spec_with(vec![(pt(&[0, 0]), Mat::scalar(Complex64::new(1.0, 0.0)))], 1, 0.25);
        let lifted = lift_delta_field(&spec);
        let v = lifted.scalar_at(&pt(&[0, 0]));
        assert!((v.re - 0.5f64.exp()).abs() < 1e-15 && v.im == 0.0);
    }

    #[test]
    fn nilpotent_lift_is_affine() {
        let f = Mat::from_real_rows(&[&[0.0, 3.0], &[0.0, 0.0]]);
        let spec = spec_with(vec![(pt(&[1, 1]), f.clone())], 2, 0.5);
        let lifted = lift_delta_field(&spec);
        assert!(lifted.value_at(&pt(&[1, 1])).dist(&(&Mat::identity(2) + &f)) < 1e-15);
    }

    #[test]
    fn overlapping_balls_rejected() {
        let base = LatticeField::from_values(
            2,
            1,
            3.0,
            Regime::Additive,
            vec![(pt(&[0, 0]), Mat::identity(1)), (pt(&[1, 0]), Mat::identity(1))],
        )
        .unwrap();
        assert!(DeltaFieldSpec::uniform(base.clone(), 1.0, 0.5).is_err());
        assert!(DeltaFieldSpec::uniform(base.clone(), 1.0, 0.49).is_ok());
        assert!(DeltaFieldSpec::uniform(base, -1.0, 0.2).is_err());
    }

    #[test]
    fn grazing_ray_is_rejected() {
        let spec = spec_with(vec![(pt(&[0, 0]), Mat::identity(1))], 1, 0.2);
        let ray = Ray::new(vec![rational(0, 1), rational(1, 10)], vec![1, 0]).unwrap();
        assert!(matches!(continuous_xray_delta(&spec, &ray), Err(Error::NotInTDoublePrime(_))));
        let clear = Ray::new(vec![rational(0, 1), rational(1, 2)], vec![1, 0]).unwrap();
        assert_eq!(continuous_xray_delta(&spec, &clear).unwrap(), Mat::identity(1));
    }

    #[test]
    fn agrees_with_lifted_discrete_transform() {
        let a = Mat::from_real_rows(&[&[0.1, 0.4], &[-0.2, 0.3]]);
        let b = Mat::from_real_rows(&[&[0.0, -0.5], &[0.7, 0.1]]);
        let spec = spec_with(vec![(pt(&[0, 0]), a), (pt(&[1, 2]), b)], 2, 0.2);
        let ray = Ray::through(&pt(&[0, 0]), vec![1, 2]).unwrap();
        let con = continuous_xray_delta(&spec, &ray).unwrap();
        let dis = discrete_xray(&lift_delta_field(&spec), &ray).unwrap();
        assert!(con.dist(&dis) < 1e-14);
    }
}
