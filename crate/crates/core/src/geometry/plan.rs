//! The ray family for layer-stripping reconstruction from cell-chord data.
//!
//! Within each slice the cells of the ball are peeled off from the outside in.
//! At each step the cells owning a farthest vertex `x(z)` of the remaining
//! union form the next layer. For such a cell the ray through
//! `y(z) = (1 − ε) x(z)`, perpendicular to `y(z)`, clips only a small corner
//! of `U_z` and stays clear of every other remaining cell, so its measurement
//! involves `z` and already-recovered cells only.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::LN_2;

use num_traits::{One, Zero};

use super::{
    abs, cell_chords_in_ball, closed_cell_interval, rational, rational_from_int, rational_to_f64, slices, Ball,
    CellChord, LatticePoint, Rational, Ray, Slice,
};
use crate::{Error, Result};

const MAX_HALVINGS: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct PlanEntry {
    pub z: LatticePoint,
    /// 1-based layer index inside the entry's slice.
    pub layer: usize,
    /// Farthest vertex of `Ū_z` chosen for this cell (full `d` coordinates).
    pub x: Vec<Rational>,
    /// Base point of the ray, `(1 − ε) x` in the slice plane.
    pub y: Vec<Rational>,
    pub epsilon: Rational,
    pub ray: Ray,
    /// Chords through cells of `B_r`, ordered along the ray.
    pub chords: Vec<CellChord>,
}

impl PlanEntry {
    /// `Λ(z, z)`, the chord of the entry's ray through its own cell.
    pub fn own_chord(&self) -> f64 {
        self.chords.iter().find(|c| c.cell == self.z).map_or(0.0, |c| c.length)
    }

    /// Trailing coordinates identifying the slice.
    pub fn slice_tail(&self) -> &[i64] {
        &self.z.0[2..]
    }
}

/// Exact geometry of one entry: `(z, layer, x, y, dir)`.
pub type PlanRecord = (LatticePoint, usize, Vec<Rational>, Vec<Rational>, Vec<i64>);

#[derive(Clone, Debug, PartialEq)]
pub struct GammaRPlan {
    pub r: f64,
    /// Norm bound `M` the chord lengths were sized for.
    pub m_bound: f64,
    pub d: usize,
    pub entries: Vec<PlanEntry>,
}

impl GammaRPlan {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ball(&self) -> Result<Ball> {
        Ball::new(self.r)
    }

    /// Largest layer index over all slices.
    pub fn max_layer(&self) -> usize {
        self.entries.iter().map(|e| e.layer).max().unwrap_or(0)
    }

    pub fn rays(&self) -> impl Iterator<Item = &Ray> {
        self.entries.iter().map(|e| &e.ray)
    }

    /// Rebuilds a plan from its exact geometric records, recomputing `ε` and
    /// the chord lists from the rays.
    pub fn from_records(r: f64, m_bound: f64, d: usize, records: Vec<PlanRecord>) -> Result<Self> {
        let ball = Ball::new(r)?;
        let mut entries = Vec::with_capacity(records.len());
        for (z, layer, x, y, dir) in records {
            if z.dim() != d || x.len() != d || y.len() != d {
                return Err(Error::invalid(format!("plan entry {z} has wrong dimension")));
            }
            if x[0].is_zero() {
                return Err(Error::invalid(format!("plan entry {z} has a degenerate vertex")));
            }
            let epsilon = Rational::one() - &y[0] / &x[0];
            let ray = Ray::new(y.clone(), dir)?;
            let chords = cell_chords_in_ball(&ray, &ball);
            entries.push(PlanEntry { z, layer, x, y, epsilon, ray, chords });
        }
        Ok(GammaRPlan { r, m_bound, d, entries })
    }

    /// Verifies the construction invariants in exact arithmetic:
    /// one entry per lattice point, `y = (1 − ε) x` with `ε ∈ (0, 1)`,
    /// the ray perpendicular to `y` inside its slice, `0 < Λ(z,z) < log 2 / M`,
    /// and the ray disjoint from every closed cell of the same slice that is
    /// not yet recovered when `z` is.
    pub fn check_invariants(&self) -> Result<()> {
        let ball = self.ball()?;
        let expected: BTreeSet<LatticePoint> = super::ball_lattice_points(&ball, self.d).into_iter().collect();
        let got: BTreeSet<LatticePoint> = self.entries.iter().map(|e| e.z.clone()).collect();
        if got != expected || got.len() != self.entries.len() {
            return Err(Error::invalid(format!(
                "plan covers {} distinct cells in {} entries, ball has {}",
                got.len(),
                self.entries.len(),
                expected.len()
            )));
        }
        for e in &self.entries {
            let fail = |what: &str| Err(Error::invalid(format!("plan entry {}: {what}", e.z)));
            if !(e.epsilon > Rational::zero() && e.epsilon < Rational::one()) {
                return fail("ε outside (0, 1)");
            }
            let shrink = Rational::one() - &e.epsilon;
            if e.y[0] != &shrink * &e.x[0] || e.y[1] != &shrink * &e.x[1] || e.y[2..] != e.x[2..] {
                return fail("y is not (1 − ε) x");
            }
            if e.ray.base() != e.y.as_slice() {
                return fail("ray does not pass through y");
            }
            let dir = e.ray.dir();
            if dir[2..].iter().any(|&c| c != 0) {
                return fail("ray leaves its slice");
            }
            let dot = rational_from_int(dir[0]) * &e.y[0] + rational_from_int(dir[1]) * &e.y[1];
            if !dot.is_zero() {
                return fail("ray is not perpendicular to y");
            }
            let own = e.own_chord();
            if !(own > 0.0 && own * self.m_bound < LN_2) {
                return fail("own chord outside (0, log 2 / M)");
            }
            for other in &self.entries {
                if other.z == e.z || other.slice_tail() != e.slice_tail() || other.layer < e.layer {
                    continue;
                }
                if closed_cell_interval(&e.ray, &other.z).is_some() {
                    return Err(Error::invalid(format!(
                        "plan entry {}: ray meets the closed cell of {}",
                        e.z, other.z
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Builds the reconstruction ray family for `B_r ∩ Z^d` and norm bound `M`.
///
/// For `d ≥ 3` the two-dimensional construction is repeated in every slice
/// `x_3 = z_3, …, x_d = z_d` meeting the ball.
pub fn build_gamma_r_plan(r: f64, m_bound: f64, d: usize) -> Result<GammaRPlan> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::domain(format!("r must be positive, got {r}")));
    }
    if !(m_bound.is_finite() && m_bound > 0.0) {
        return Err(Error::domain(format!("M must be positive, got {m_bound}")));
    }
    if d < 2 {
        return Err(Error::domain("dimension must be at least 2"));
    }
    let ball = Ball::new(r)?;
    let mut entries = Vec::new();
    for slice in slices(&ball, d) {
        plan_slice(&ball, &slice, m_bound, &mut entries)?;
    }
    Ok(GammaRPlan { r, m_bound, d, entries })
}

/// Twice the farthest-vertex coordinate: `2|a| + 1` with the sign of `a`,
/// `+1` for `a = 0` (the lexicographically larger of the two tied vertices).
fn doubled_far_coord(a: i64) -> i64 {
    if a < 0 {
        2 * a - 1
    } else {
        2 * a + 1
    }
}

fn plan_slice(ball: &Ball, slice: &Slice, m_bound: f64, out: &mut Vec<PlanEntry>) -> Result<()> {
    let mut remaining: BTreeSet<(i64, i64)> = slice.points().iter().map(|p| (p.0[0], p.0[1])).collect();
    let mut layer = 0;
    while !remaining.is_empty() {
        layer += 1;
        let far = |&(a, b): &(i64, i64)| {
            let (u, v) = (doubled_far_coord(a), doubled_far_coord(b));
            u * u + v * v
        };
        let max_far = remaining.iter().map(far).max().expect("nonempty");
        let current: Vec<(i64, i64)> = remaining.iter().copied().filter(|c| far(c) == max_far).collect();
        for &(a, b) in &current {
            let z = slice.embed(a, b);
            let others: Vec<LatticePoint> =
                remaining.iter().filter(|&&c| c != (a, b)).map(|&(p, q)| slice.embed(p, q)).collect();
            out.push(place_ray(ball, slice, z, layer, &others, m_bound)?);
        }
        for c in current {
            remaining.remove(&c);
        }
    }
    Ok(())
}

fn place_ray(
    ball: &Ball,
    slice: &Slice,
    z: LatticePoint,
    layer: usize,
    others: &[LatticePoint],
    m_bound: f64,
) -> Result<PlanEntry> {
    let (u, v) = (doubled_far_coord(z.0[0]), doubled_far_coord(z.0[1]));
    let tail: Vec<Rational> = slice.tail.iter().map(|&c| rational_from_int(c)).collect();
    let mut x = vec![rational(u, 2), rational(v, 2)];
    x.extend(tail.iter().cloned());

    let mut dir = vec![0i64; z.dim()];
    dir[0] = -v;
    dir[1] = u;

    // Largest ε keeping (1 − ε) x inside the open cell: 1/|x_k| per axis, capped at 1.
    let mut eps0 = Rational::one();
    for xk in &x[..2] {
        let bound = Rational::one() / abs(xk);
        if bound < eps0 {
            eps0 = bound;
        }
    }
    let mut epsilon = eps0 / rational_from_int(2);
    let two = rational_from_int(2);

    for _ in 0..MAX_HALVINGS {
        let shrink = Rational::one() - &epsilon;
        let mut y = vec![&shrink * &x[0], &shrink * &x[1]];
        y.extend(tail.iter().cloned());
        let ray = Ray::new(y.clone(), dir.clone())?;
        let own =
            closed_cell_interval(&ray, &z).map(|(lo, hi)| rational_to_f64(&(hi - lo)) * ray.dir_norm()).unwrap_or(0.0);
        let clear = || others.iter().all(|c| closed_cell_interval(&ray, c).is_none());
        if own > 0.0 && own * m_bound < LN_2 && clear() {
            let chords = cell_chords_in_ball(&ray, ball);
            return Ok(PlanEntry { z, layer, x, y, epsilon, ray, chords });
        }
        epsilon /= &two;
    }
    Err(Error::domain(format!("no admissible ray for cell {z} after {MAX_HALVINGS} halvings of ε")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64]) -> LatticePoint {
        LatticePoint(c.to_vec())
    }

    #[test]
    fn single_cell_plan() {
        let plan = build_gamma_r_plan(0.9, 1.0, 2).unwrap();
        assert_eq!(plan.len(), 1);
        let e = &plan.entries[0];
        assert_eq!(e.z, pt(&[0, 0]));
        assert_eq!(e.x, vec![rational(1, 2), rational(1, 2)]);
        assert_eq!(e.ray.dir(), &[-1, 1]);
        let own = e.own_chord();
        assert!(own > 0.0 && own < LN_2);
        plan.check_invariants().unwrap();
    }

    #[test]
    fn unit_ball_plan_layers() {
        let plan = build_gamma_r_plan(1.0, 1.0, 2).unwrap();
        assert_eq!(plan.len(), 5);
        let layer1: BTreeSet<_> = plan.entries.iter().filter(|e| e.layer == 1).map(|e| e.z.clone()).collect();
        let expected: BTreeSet<_> = [pt(&[-1, 0]), pt(&[0, -1]), pt(&[0, 1]), pt(&[1, 0])].into_iter().collect();
        assert_eq!(layer1, expected);
        let last: Vec<_> = plan.entries.iter().filter(|e| e.layer == 2).collect();
        assert_eq!(last.len(), 1);
        assert_eq!(last[0].z, pt(&[0, 0]));
        for e in plan.entries.iter().filter(|e| e.layer == 1) {
            assert!(closed_cell_interval(&e.ray, &pt(&[0, 0])).is_none());
        }
        plan.check_invariants().unwrap();
    }

    #[test]
    fn plans_have_one_entry_per_lattice_point() {
        for (r, d) in [(2.0, 2), (3.0, 2), (4.0, 2), (2.0, 3)] {
            let plan = build_gamma_r_plan(r, 1.0, d).unwrap();
            assert_eq!(plan.len(), super::super::ball_lattice_points(&Ball::new(r).unwrap(), d).len());
            plan.check_invariants().unwrap();
        }
    }

    #[test]
    fn larger_bound_shrinks_chords() {
        let plan = build_gamma_r_plan(2.0, 20.0, 2).unwrap();
        plan.check_invariants().unwrap();
        assert!(plan.entries.iter().all(|e| e.own_chord() * 20.0 < LN_2));
    }

    #[test]
    fn bad_arguments_are_domain_errors() {
        assert!(matches!(build_gamma_r_plan(0.0, 1.0, 2), Err(Error::Domain(_))));
        assert!(matches!(build_gamma_r_plan(1.0, 0.0, 2), Err(Error::Domain(_))));
        assert!(matches!(build_gamma_r_plan(1.0, -1.0, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn records_round_trip() {
        let plan = build_gamma_r_plan(2.0, 1.0, 2).unwrap();
        let records = plan
            .entries
            .iter()
            .map(|e| (e.z.clone(), e.layer, e.x.clone(), e.y.clone(), e.ray.dir().to_vec()))
            .collect();
        let rebuilt = GammaRPlan::from_records(plan.r, plan.m_bound, plan.d, records).unwrap();
        assert_eq!(rebuilt, plan);
    }
}
