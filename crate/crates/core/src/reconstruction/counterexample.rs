use alloc::vec;

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::geometry::{GammaRPlan, LatticePoint, Ray};
use crate::transforms::star_transform;
use crate::{Error, LatticeField, Mat, Regime, Result};

/// Two scalar fields on a single cell with the same cell-chord data.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub ray: Ray,
    /// `Λ(0,0)`.
    pub chord: f64,
    pub f1: LatticeField,
    pub f2: LatticeField,
    pub s1: Mat,
    pub s2: Mat,
}

/// `f1(0) = 1` and `f2(0) = 1 + 2kπi/Λ(0,0)` share their transform on the
/// plan's only ray, `exp(Λ(0,0))`.
pub fn counterexample(k: i64, plan: &GammaRPlan) -> Result<Counterexample> {
    if k == 0 {
        return Err(Error::domain("k = 0 gives two identical fields"));
    }
    let origin = LatticePoint::origin(2);
    if plan.d != 2 || plan.len() != 1 || plan.entries[0].z != origin {
        return Err(Error::invalid("needs the single-cell plan of a ball with r < 1 in d = 2"));
    }
    let entry = &plan.entries[0];
    let chord = entry.own_chord();
    let v1 = Complex64::new(1.0, 0.0);
    let v2 = Complex64::new(1.0, 2.0 * k as f64 * PI / chord);
    let f1 = LatticeField::scalar(2, plan.r, Regime::Additive, vec![(origin.clone(), v1)])?;
    let f2 = LatticeField::scalar(2, plan.r, Regime::Additive, vec![(origin, v2)])?;
    let s1 = star_transform(&f1, &entry.ray)?;
    let s2 = star_transform(&f2, &entry.ray)?;
    Ok(Counterexample { ray: entry.ray.clone(), chord, f1, f2, s1, s2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_gamma_r_plan;

    #[test]
    fn same_data_different_fields() {
        let plan = build_gamma_r_plan(0.5, 1.0, 2).unwrap();
        for k in [1, -1, 3] {
            let c = counterexample(k, &plan).unwrap();
            assert!(c.s1.dist(&c.s2) < 1e-12);
            assert!((c.s1.get(0, 0).re - c.chord.exp()).abs() < 1e-12);
            assert!(c.f1.max_residual(&c.f2) > 1.0);
        }
        assert!(matches!(counterexample(0, &plan), Err(Error::Domain(_))));
        let big = build_gamma_r_plan(1.0, 1.0, 2).unwrap();
        assert!(counterexample(1, &big).is_err());
    }
}
