use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use super::Reconstruction;
use crate::geometry::{
    ball_lattice_points, gamma_z, rational_from_f64, rational_from_int, ray_lattice_hits, Ball, LatticePoint, Ray,
};
use crate::{Error, LatticeField, Mat, Measurements, Regime, Result};

/// Planar annulus `α ≤ sqrt(z_1² + z_2²) ≤ β`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Annulus {
    alpha: f64,
    beta: f64,
}

impl Annulus {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha <= beta) || !beta.is_finite() {
            return Err(Error::domain(format!("annulus needs 0 ≤ α ≤ β, got α = {alpha}, β = {beta}")));
        }
        Ok(Annulus { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Exact membership test on the planar norm.
    pub fn contains(&self, z: &LatticePoint) -> bool {
        let planar = rational_from_int(z.planar_norm_sq());
        let a = rational_from_f64(self.alpha).expect("finite");
        let b = rational_from_f64(self.beta).expect("finite");
        &a * &a <= planar && planar <= &b * &b
    }
}

fn targets(ball: &Ball, d: usize, annulus: Option<&Annulus>) -> Result<Vec<LatticePoint>> {
    if let Some(a) = annulus {
        if a.beta < ball.radius() {
            return Err(Error::domain(format!(
                "annulus outer radius {} is below the support radius {}",
                a.beta,
                ball.radius()
            )));
        }
    }
    let mut points: Vec<LatticePoint> =
        ball_lattice_points(ball, d).into_iter().filter(|z| annulus.is_none_or(|a| a.contains(z))).collect();
    // Outermost first; a stable sort keeps the lexicographic order inside a layer.
    points.sort_by_key(|z| core::cmp::Reverse(z.planar_norm_sq()));
    Ok(points)
}

/// The rays `γ_z` consumed by [`reconstruct_layers_discrete`], in reading order.
pub fn layer_rays(ball: &Ball, d: usize, annulus: Option<&Annulus>) -> Result<Vec<Ray>> {
    Ok(targets(ball, d, annulus)?.iter().map(gamma_z).collect())
}

/// Layer stripping from `S(F)` on the rays `γ_z`.
///
/// Points are recovered in decreasing planar norm. Every other lattice point of
/// `γ_z` inside the ball is farther from the slice origin than `z`, hence
/// already known, and `F(z) = (after)^{-1} · S(F)(γ_z) · (before)^{-1}`.
/// With an annulus only the points inside it are recovered.
pub fn reconstruct_layers_discrete<M: Measurements + ?Sized>(
    data: &M,
    r: f64,
    annulus: Option<&Annulus>,
) -> Result<Reconstruction> {
    let d = data.d();
    let n = data.n();
    let ball = Ball::new(r)?;
    let mut known: BTreeMap<LatticePoint, Mat> = BTreeMap::new();
    let mut layers_per_slice: BTreeMap<Vec<i64>, BTreeSet<i64>> = BTreeMap::new();
    let mut measurements = 0;

    for z in targets(&ball, d, annulus)? {
        let ray = gamma_z(&z);
        let value = data.measure(&ray)?;
        measurements += 1;

        let hits = ray_lattice_hits(&ray, &ball);
        let own_t = hits.iter().find(|(_, p)| *p == z).map(|(t, _)| t.clone()).expect("γ_z passes through z");
        let mut before = Mat::identity(n);
        let mut after = Mat::identity(n);
        for (t, p) in &hits {
            if *p == z {
                continue;
            }
            let f = known.get(p).ok_or_else(|| Error::invalid(format!("point {p} on γ_{z} is not recovered yet")))?;
            if *t < own_t {
                before = f * &before;
            } else {
                after = f * &after;
            }
        }
        let peel = || -> Result<Mat> { Ok(&(&after.inv()? * &value) * &before.inv()?) };
        let f = peel().map_err(|e| e.context(format_args!("recovering {z} from ray {ray}")))?;
        layers_per_slice.entry(z.0[2..].to_vec()).or_default().insert(z.planar_norm_sq());
        known.insert(z, f);
    }

    let layers = layers_per_slice.values().map(BTreeSet::len).max().unwrap_or(0);
    let mut field = LatticeField::new(d, n, r, Regime::Multiplicative)?;
    for (z, f) in known {
        if !f.is_identity() {
            field.insert(z, f)?;
        }
    }
    Ok(Reconstruction { field, measurements, layers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::discrete_xray;
    use crate::Synthetic;
    use alloc::vec;

    fn pt(c: &[i64]) -> LatticePoint {
        LatticePoint(c.to_vec())
    }

    #[test]
    fn outer_point_read_directly() {
        let m = Mat::from_real_rows(&[&[1.0, 2.0], &[0.0, 3.0]]);
        let hidden = LatticeField::from_values(2, 2, 2.0, Regime::Multiplicative, vec![(pt(&[2, 0]), m)]).unwrap();
        let data = Synthetic::new(2, 2, 2.0, |ray: &Ray| discrete_xray(&hidden, ray));
        let rec = reconstruct_layers_discrete(&data, 2.0, None).unwrap();
        assert_eq!(rec.measurements, 13);
        assert_eq!(rec.layers, 4);
        assert!(rec.field.max_residual(&hidden) < 1e-15);
    }

    #[test]
    fn noncommuting_pair_on_one_ray() {
        let a = Mat::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let b = Mat::from_real_rows(&[&[1.0, 0.0], &[1.0, 1.0]]);
        let c = Mat::from_real_rows(&[&[2.0, 0.0], &[0.5, 1.0]]);
        let hidden = LatticeField::from_values(
            2,
            2,
            1.5,
            Regime::Multiplicative,
            vec![(pt(&[1, -1]), a), (pt(&[1, 0]), b), (pt(&[1, 1]), c)],
        )
        .unwrap();
        let data = Synthetic::new(2, 2, 1.5, |ray: &Ray| discrete_xray(&hidden, ray));
        let rec = reconstruct_layers_discrete(&data, 1.5, None).unwrap();
        assert!(rec.field.max_residual(&hidden) < 1e-14);
    }

    #[test]
    fn singular_data_names_the_point() {
        let data = Synthetic::new(2, 2, 2.0, |_: &Ray| Ok(Mat::zeros(2)));
        match reconstruct_layers_discrete(&data, 2.0, None) {
            Err(Error::Singular(m)) => assert!(m.contains("recovering") && m.contains("dir=")),
            other => panic!("expected a singular error, got {other:?}"),
        }
    }

    #[test]
    fn annulus_validation() {
        assert!(Annulus::new(2.0, 1.0).is_err());
        assert!(Annulus::new(-1.0, 1.0).is_err());
        let a = Annulus::new(1.0, 2.0).unwrap();
        assert!(a.contains(&pt(&[1, 1])) && !a.contains(&pt(&[0, 0])) && a.contains(&pt(&[0, 2])));
        let data = Synthetic::new(2, 1, 3.0, |_: &Ray| Ok(Mat::identity(1)));
        assert!(matches!(reconstruct_layers_discrete(&data, 3.0, Some(&a)), Err(Error::Domain(_))));
    }
}
