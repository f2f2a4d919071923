use alloc::vec::Vec;

use super::Reconstruction;
use crate::geometry::{ball_lattice_points, irrational_direction_for, Ball, Ray};
use crate::{LatticeField, Measurements, Regime, Result};

/// One ray per lattice point of the ball, each meeting no other lattice point of the ball.
pub fn irrational_rays(ball: &Ball, d: usize) -> Result<Vec<Ray>> {
    ball_lattice_points(ball, d).iter().map(|x| irrational_direction_for(x, ball)).collect()
}

/// `F(x) = S(F)(γ_x)` where `γ_x` passes through `x` and no other point of `B_r ∩ Z^d`.
pub fn reconstruct_irrational<M: Measurements + ?Sized>(data: &M, r: f64) -> Result<Reconstruction> {
    let ball = Ball::new(r)?;
    let mut field = LatticeField::new(data.d(), data.n(), r, Regime::Multiplicative)?;
    let mut measurements = 0;
    for x in ball_lattice_points(&ball, data.d()) {
        let ray = irrational_direction_for(&x, &ball)?;
        let value = data.measure(&ray)?;
        measurements += 1;
        if !value.is_identity() {
            field.insert(x, value)?;
        }
    }
    Ok(Reconstruction { field, measurements, layers: 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LatticePoint;
    use crate::transforms::discrete_xray;
    use crate::{Mat, Synthetic};
    use alloc::vec;

    #[test]
    fn identity_and_single_point() {
        let hidden = LatticeField::from_values(
            2,
            2,
            2.0,
            Regime::Multiplicative,
            vec![(LatticePoint(vec![1, -1]), Mat::from_real_rows(&[&[2.0, 1.0], &[0.0, 1.0]]))],
        )
        .unwrap();
        let data = Synthetic::new(2, 2, 2.0, |ray: &Ray| discrete_xray(&hidden, ray));
        let rec = reconstruct_irrational(&data, 2.0).unwrap();
        assert_eq!(rec.measurements, 13);
        assert_eq!(rec.field, hidden);
    }
}
