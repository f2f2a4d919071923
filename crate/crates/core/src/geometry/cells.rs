use alloc::vec::Vec;

use super::{
    floor_to_i64, lattice::isqrt, rational, rational_from_int, rational_to_f64, Ball, LatticePoint, Rational, Ray,
};

/// One crossing of a ray through a half-open unit cell `U_ζ = [-1/2, 1/2)^d + ζ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CellChord {
    pub cell: LatticePoint,
    /// Euclidean length of the crossing.
    pub length: f64,
    pub t_enter: Rational,
    pub t_exit: Rational,
}

/// Parameter interval of `γ ∩ Ū_ζ` for the closed cell, if nonempty.
///
/// A single-point intersection (a grazed corner) comes back as `(t, t)`.
pub fn closed_cell_interval(ray: &Ray, cell: &LatticePoint) -> Option<(Rational, Rational)> {
    let half = rational(1, 2);
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for ((b, &d), &c) in ray.base().iter().zip(ray.dir()).zip(cell.coords()) {
        let c = rational_from_int(c);
        let (left, right) = (&c - &half, &c + &half);
        if d == 0 {
            if *b < left || *b > right {
                return None;
            }
            continue;
        }
        let dq = rational_from_int(d);
        let ta = (&left - b) / &dq;
        let tb = (&right - b) / &dq;
        let (a, z) = if ta <= tb { (ta, tb) } else { (tb, ta) };
        lo = Some(match lo {
            Some(v) if v >= a => v,
            _ => a,
        });
        hi = Some(match hi {
            Some(v) if v <= z => v,
            _ => z,
        });
    }
    let (lo, hi) = (lo?, hi?);
    (lo <= hi).then_some((lo, hi))
}

/// Chords of `γ` through every cell `ζ ∈ [-K, K]^d`, ordered by entry parameter.
///
/// Cell membership follows the half-open convention: a face shared by two
/// cells belongs to the one with the larger coordinate. Zero-length
/// incidences are dropped.
fn chords_in_box(ray: &Ray, reach: i64) -> Vec<CellChord> {
    let half = rational(1, 2);
    let edge_lo = rational_from_int(-reach) - &half;
    let edge_hi = rational_from_int(reach) + &half;

    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for (b, &d) in ray.base().iter().zip(ray.dir()) {
        if d == 0 {
            if *b < edge_lo || *b >= edge_hi {
                return Vec::new();
            }
            continue;
        }
        let dq = rational_from_int(d);
        let ta = (&edge_lo - b) / &dq;
        let tb = (&edge_hi - b) / &dq;
        let (a, z) = if ta <= tb { (ta, tb) } else { (tb, ta) };
        if lo.as_ref().is_none_or(|v| a > *v) {
            lo = Some(a);
        }
        if hi.as_ref().is_none_or(|v| z < *v) {
            hi = Some(z);
        }
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Vec::new();
    };
    if lo >= hi {
        return Vec::new();
    }

    let mut breaks = Vec::new();
    breaks.push(lo.clone());
    breaks.push(hi.clone());
    for (b, &d) in ray.base().iter().zip(ray.dir()) {
        if d == 0 {
            continue;
        }
        let dq = rational_from_int(d);
        for k in -reach - 1..=reach {
            let face = rational_from_int(k) + &half;
            let t = (face - b) / &dq;
            if t > lo && t < hi {
                breaks.push(t);
            }
        }
    }
    breaks.sort();
    breaks.dedup();

    let dir_norm = ray.dir_norm();
    let two = rational_from_int(2);
    breaks
        .windows(2)
        .map(|w| {
            let mid = (&w[0] + &w[1]) / &two;
            let cell = ray.point_at(&mid).iter().map(|x| floor_to_i64(&(x + &half))).collect();
            CellChord {
                cell: LatticePoint(cell),
                length: rational_to_f64(&(&w[1] - &w[0])) * dir_norm,
                t_enter: w[0].clone(),
                t_exit: w[1].clone(),
            }
        })
        .collect()
}

/// Chords through the cells `ζ ∈ B_{r+√d} ∩ Z^d` met by the ray with positive length.
pub fn cell_chords(ray: &Ray, r: f64) -> Vec<CellChord> {
    let outer = r + libm::sqrt(ray.dim() as f64);
    let reach = libm::floor(outer) as i64;
    let limit = outer * outer;
    chords_in_box(ray, reach).into_iter().filter(|c| (c.cell.norm_sq() as f64) <= limit).collect()
}

/// Chords through cells whose centers lie in the ball, i.e. the cells that can
/// carry a nonzero value of a field supported in `B_r`.
pub fn cell_chords_in_ball(ray: &Ray, ball: &Ball) -> Vec<CellChord> {
    chords_in_box(ray, isqrt(ball.norm_sq_bound())).into_iter().filter(|c| ball.contains(&c.cell)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational;
    use alloc::vec;

    fn pt(c: &[i64]) -> LatticePoint {
        LatticePoint(c.to_vec())
    }

    #[test]
    fn axis_aligned_full_crossings() {
        let ray = Ray::new(vec![rational(3, 10), rational(0, 1)], vec![0, 1]).unwrap();
        let chords = cell_chords(&ray, 2.0);
        assert!(!chords.is_empty());
        for c in &chords {
            assert_eq!(c.cell.0[0], 0);
            assert!((c.length - 1.0).abs() < 1e-15);
        }
        let ks: Vec<i64> = chords.iter().map(|c| c.cell.0[1]).collect();
        assert!(ks.windows(2).all(|w| w[1] == w[0] + 1));
    }

    #[test]
    fn diagonal_through_origin_cell() {
        let ray = Ray::through(&pt(&[0, 0]), vec![1, 1]).unwrap();
        let chords = cell_chords(&ray, 1.0);
        let origin = chords.iter().find(|c| c.cell == pt(&[0, 0])).unwrap();
        assert!((origin.length - 2f64.sqrt()).abs() < 1e-15);
        // Corner-only contacts with (1,0), (0,1) etc. have zero length.
        assert!(chords.iter().all(|c| c.cell.0[0] == c.cell.0[1]));
    }

    #[test]
    fn shared_face_belongs_to_larger_cell() {
        let ray = Ray::new(vec![rational(1, 2), rational(0, 1)], vec![0, 1]).unwrap();
        let chords = cell_chords(&ray, 2.0);
        assert!(!chords.is_empty());
        assert!(chords.iter().all(|c| c.cell.0[0] == 1 && (c.length - 1.0).abs() < 1e-15));
    }

    #[test]
    fn closed_interval_detects_corner_touch() {
        let ray = Ray::through(&pt(&[0, 0]), vec![1, 1]).unwrap();
        let (a, b) = closed_cell_interval(&ray, &pt(&[1, 0])).unwrap();
        assert_eq!(a, b);
        assert!(closed_cell_interval(&ray, &pt(&[2, 0])).is_none());
    }
}
