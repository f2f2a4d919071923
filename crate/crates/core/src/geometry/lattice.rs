use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{gcd_all, is_integer, rational_from_int, Ball, LatticePoint, Rational, Ray};
use crate::{Error, Result};

/// `z / gcd(|z_1|, …, |z_d|)`, keeping the sign pattern.
pub fn primitive_direction(z: &[i64]) -> Result<Vec<i64>> {
    let g = gcd_all(z);
    if g == 0 {
        return Err(Error::domain("direction must be a nonzero integer vector"));
    }
    Ok(z.iter().map(|c| c / g).collect())
}

/// All `z ∈ Z^d` with `|z| ≤ r`, in lexicographic order.
pub fn ball_lattice_points(ball: &Ball, d: usize) -> Vec<LatticePoint> {
    let bound = ball.norm_sq_bound();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(d);
    enumerate_ball(bound, d, &mut current, &mut out);
    out
}

fn enumerate_ball(budget: i64, remaining: usize, current: &mut Vec<i64>, out: &mut Vec<LatticePoint>) {
    if remaining == 0 {
        out.push(LatticePoint(current.clone()));
        return;
    }
    let reach = isqrt(budget);
    for c in -reach..=reach {
        current.push(c);
        enumerate_ball(budget - c * c, remaining - 1, current, out);
        current.pop();
    }
}

pub(crate) fn isqrt(v: i64) -> i64 {
    if v < 0 {
        return -1;
    }
    let mut s = libm::sqrt(v as f64) as i64;
    while s * s > v {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= v {
        s += 1;
    }
    s
}

/// A two-dimensional slice `{ (x_1, x_2, z_3, …, z_d) }` of the ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    /// Fixed trailing coordinates `(z_3, …, z_d)`; empty for `d = 2`.
    pub tail: Vec<i64>,
    /// Largest admissible `x_1² + x_2²` inside the slice.
    pub planar_bound: i64,
}

impl Slice {
    /// Lattice points of the ball lying in this slice, lexicographic order.
    pub fn points(&self) -> Vec<LatticePoint> {
        let reach = isqrt(self.planar_bound);
        let mut out = Vec::new();
        for a in -reach..=reach {
            for b in -reach..=reach {
                if a * a + b * b <= self.planar_bound {
                    let mut c = vec![a, b];
                    c.extend_from_slice(&self.tail);
                    out.push(LatticePoint(c));
                }
            }
        }
        out
    }

    pub fn embed(&self, a: i64, b: i64) -> LatticePoint {
        let mut c = vec![a, b];
        c.extend_from_slice(&self.tail);
        LatticePoint(c)
    }

    pub fn contains(&self, z: &LatticePoint) -> bool {
        z.0[2..] == self.tail[..]
    }
}

/// The planes `x_3 = z_3, …, x_d = z_d` that meet `B_r ∩ Z^d`.
pub fn slices(ball: &Ball, d: usize) -> Vec<Slice> {
    assert!(d >= 2, "slices need d ≥ 2");
    if d == 2 {
        return vec![Slice { tail: Vec::new(), planar_bound: ball.norm_sq_bound() }];
    }
    let tails = ball_lattice_points(&Ball::from_norm_sq_bound(ball.norm_sq_bound()), d - 2);
    tails
        .into_iter()
        .map(|t| {
            let used = t.norm_sq();
            Slice { tail: t.0, planar_bound: ball.norm_sq_bound() - used }
        })
        .collect()
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Integer coefficients `c` with `Σ c_i p_i = 1` for a primitive `p`.
fn bezout(p: &[i64]) -> Vec<i64> {
    let mut coeffs = vec![0i64; p.len()];
    let mut g = 0i64;
    for i in 0..p.len() {
        let (g2, a, b) = ext_gcd(g, p[i]);
        for c in &mut coeffs[..i] {
            *c *= a;
        }
        coeffs[i] = b;
        g = g2;
    }
    debug_assert_eq!(g, 1);
    coeffs
}

/// Points of `γ ∩ Z^d ∩ B_r` with their ray parameters, in increasing order.
///
/// The lattice points of a line with primitive direction form a progression
/// `p_0 + k·dir`; `p_0` is found through a Bézout combination of `dir`.
pub fn ray_lattice_hits(ray: &Ray, ball: &Ball) -> Vec<(Rational, LatticePoint)> {
    let dir = ray.dir();
    let coeffs = bezout(dir);
    let t0 =
        -coeffs.iter().zip(ray.base()).map(|(&c, b)| b * rational_from_int(c)).fold(Rational::zero(), |acc, v| acc + v);
    let p0 = ray.point_at(&t0);
    if !p0.iter().all(is_integer) {
        return Vec::new();
    }
    let p0: Vec<i64> = p0.iter().map(super::floor_to_i64).collect();

    let a: i128 = dir.iter().map(|&c| (c as i128) * (c as i128)).sum();
    let b: i128 = 2 * p0.iter().zip(dir).map(|(&x, &c)| (x as i128) * (c as i128)).sum::<i128>();
    let c: i128 = p0.iter().map(|&x| (x as i128) * (x as i128)).sum();
    let bound = ball.norm_sq_bound() as i128;

    let af = a as f64;
    let bf = b as f64;
    let disc = bf * bf - 4.0 * af * ((c - bound) as f64);
    let centre = -bf / (2.0 * af);
    let half = libm::sqrt(disc.max(0.0)) / (2.0 * af);
    let lo = libm::floor(centre - half) as i64 - 1;
    let hi = libm::ceil(centre + half) as i64 + 1;

    let origin = LatticePoint(p0);
    (lo..=hi)
        .filter(|&k| {
            let k = k as i128;
            a * k * k + b * k + c <= bound
        })
        .map(|k| (&t0 + rational_from_int(k), origin.offset(dir, k)))
        .collect()
}

/// `γ ∩ Z^d ∩ B_r` ordered by increasing ray parameter.
pub fn ray_lattice_points(ray: &Ray, ball: &Ball) -> Vec<LatticePoint> {
    ray_lattice_hits(ray, ball).into_iter().map(|(_, p)| p).collect()
}

/// The rational ray `γ_z` through `z`, perpendicular to `(z_1, z_2)` in the
/// `(e_1, e_2)` plane; direction `e_1` when `z_1 = z_2 = 0`.
pub fn gamma_z(z: &LatticePoint) -> Ray {
    let d = z.dim();
    let mut dir = vec![0i64; d];
    if z.planar_norm_sq() != 0 {
        dir[0] = -z.0[1];
        dir[1] = z.0[0];
    } else {
        dir[0] = 1;
    }
    Ray::through(z, dir).expect("nonzero direction")
}

/// Ordered partition of a point set into groups of equal norm, outermost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerDecomposition {
    pub layers: Vec<Vec<LatticePoint>>,
}

impl LayerDecomposition {
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }
}

/// Groups points by `z_1² + z_2²`, largest first. Ties share a layer.
pub fn planar_norm_layers(points: &[LatticePoint]) -> LayerDecomposition {
    let mut groups: BTreeMap<i64, Vec<LatticePoint>> = BTreeMap::new();
    for p in points {
        groups.entry(p.planar_norm_sq()).or_default().push(p.clone());
    }
    LayerDecomposition {
        layers: groups
            .into_values()
            .rev()
            .map(|mut v| {
                v.sort();
                v
            })
            .collect(),
    }
}

/// Norm layers `S_1, …, S_J` of `B_r ∩ Z^2`; `S_J = {0}`.
pub fn norm_layers(ball: &Ball) -> LayerDecomposition {
    planar_norm_layers(&ball_lattice_points(ball, 2))
}

/// `S_{r,θ}`: points of the ball whose forward lattice neighbours along `θ`
/// all leave the ball.
pub fn shadow_set(ball: &Ball, theta: &[i64], d: usize) -> Result<BTreeSet<LatticePoint>> {
    if theta.len() != d {
        return Err(Error::invalid(format!("direction has dimension {}, expected {d}", theta.len())));
    }
    let p = primitive_direction(theta)?;
    let step_sq: i64 = p.iter().map(|c| c * c).sum();
    // |k p| > 2r beyond this k, so nothing further can return to the ball.
    let reach = 2.0 * ball.radius();
    let k_max = libm::floor(reach / libm::sqrt(step_sq as f64)) as i64 + 1;
    Ok(ball_lattice_points(ball, d)
        .into_iter()
        .filter(|z| (1..=k_max).all(|k| !ball.contains(&z.offset(&p, k))))
        .collect())
}

/// Ray through `x` with primitive direction `(m, 1, 0, …, 0)`, `m = ⌊2r⌋ + 1`.
///
/// Since `|p| > 2r`, no other lattice point of the line lies in `B_r`.
pub fn irrational_direction_for(x: &LatticePoint, ball: &Ball) -> Result<Ray> {
    if !ball.contains(x) {
        return Err(Error::domain(format!("{x} lies outside B_r")));
    }
    let m = libm::floor(2.0 * ball.radius()) as i64 + 1;
    let mut dir = vec![0i64; x.dim()];
    dir[0] = m;
    dir[1] = 1;
    Ray::through(x, dir)
}

/// Every line with direction `dir` that meets `B_r ∩ Z^d`, based at its first
/// lattice point inside the ball.
pub fn lines_in_direction(ball: &Ball, d: usize, dir: &[i64]) -> Result<Vec<Ray>> {
    let p = primitive_direction(dir)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for z in ball_lattice_points(ball, d) {
        if seen.contains(&z) {
            continue;
        }
        let mut first = z.clone();
        while ball.contains(&first.offset(&p, -1)) {
            first = first.offset(&p, -1);
        }
        let mut cur = first.clone();
        while ball.contains(&cur) {
            seen.insert(cur.clone());
            cur = cur.offset(&p, 1);
        }
        out.push(Ray::through(&first, p.clone())?);
    }
    Ok(out)
}

/// Distinct lines through `B_r ∩ Z^d` whose primitive directions have all
/// components in `[-max_component, max_component]`, one orientation each.
pub fn rational_ray_family(ball: &Ball, d: usize, max_component: i64) -> Vec<Ray> {
    let mut dirs = BTreeSet::new();
    let span = 2 * max_component + 1;
    let total = (span as u64).pow(d as u32);
    for idx in 0..total {
        let mut rem = idx;
        let mut v = Vec::with_capacity(d);
        for _ in 0..d {
            v.push((rem % span as u64) as i64 - max_component);
            rem /= span as u64;
        }
        let Ok(p) = primitive_direction(&v) else {
            continue;
        };
        if p.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0) {
            dirs.insert(p);
        }
    }
    dirs.into_iter().flat_map(|p| lines_in_direction(ball, d, &p).expect("primitive direction")).collect()
}
