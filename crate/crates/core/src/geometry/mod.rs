//! Exact geometry of oriented lines against the integer lattice and its unit cells.
//!
//! Incidence, ordering and separation predicates are decided in exact rational
//! arithmetic. Only lengths and norms reported to the transforms are floats.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

mod cells;
mod lattice;
mod plan;

pub use cells::{cell_chords, cell_chords_in_ball, closed_cell_interval, CellChord};
pub use lattice::{
    ball_lattice_points, gamma_z, irrational_direction_for, lines_in_direction, norm_layers, planar_norm_layers,
    primitive_direction, rational_ray_family, ray_lattice_hits, ray_lattice_points, shadow_set, slices,
    LayerDecomposition, Slice,
};
pub use plan::{build_gamma_r_plan, GammaRPlan, PlanEntry, PlanRecord};

/// Exact rational coordinate.
pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_from_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::invalid(format!("non-finite value {v}")))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Formats a rational as `p/q` with a positive denominator.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p/q` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A point of `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn origin(d: usize) -> Self {
        LatticePoint(alloc::vec![0; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn norm_sq(&self) -> i64 {
        self.0.iter().map(|c| c * c).sum()
    }

    /// Squared norm of the first two coordinates (distance to the slice origin).
    pub fn planar_norm_sq(&self) -> i64 {
        self.0[0] * self.0[0] + self.0[1] * self.0[1]
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0.iter().map(|&c| rational_from_int(c)).collect()
    }

    pub fn offset(&self, dir: &[i64], k: i64) -> LatticePoint {
        LatticePoint(self.0.iter().zip(dir).map(|(a, b)| a + k * b).collect())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The closed ball `B_r` as seen by the lattice: `z ∈ B_r ∩ Z^d` iff `|z|² ≤ ⌊r²⌋`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    r: f64,
    bound: i64,
}

impl Ball {
    pub fn new(r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::domain(format!("radius must be positive and finite, got {r}")));
        }
        let exact = rational_from_f64(r)?;
        let sq = &exact * &exact;
        let bound =
            sq.floor().to_integer().to_i64().ok_or_else(|| Error::domain(format!("radius {r} is too large")))?;
        Ok(Ball { r, bound })
    }

    /// Ball whose lattice content is `{ z : |z|² ≤ bound }`.
    pub fn from_norm_sq_bound(bound: i64) -> Self {
        Ball { r: libm::sqrt(bound as f64), bound }
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    /// `⌊r²⌋`, the largest admissible squared norm of a lattice point.
    pub fn norm_sq_bound(&self) -> i64 {
        self.bound
    }

    pub fn contains(&self, z: &LatticePoint) -> bool {
        z.norm_sq() <= self.bound
    }
}

/// An oriented straight line `base + t·dir`, `t ∈ R`.
///
/// `base` is exact and `dir` is a primitive integer vector; the orientation is
/// the direction of increasing `t`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ray {
    base: Vec<Rational>,
    dir: Vec<i64>,
}

impl Ray {
    /// Builds a ray, reducing `dir` to its primitive representative.
    pub fn new(base: Vec<Rational>, dir: Vec<i64>) -> Result<Self> {
        if base.len() != dir.len() {
            return Err(Error::invalid(format!("base has dimension {} but direction has {}", base.len(), dir.len())));
        }
        if base.len() < 2 {
            return Err(Error::domain("rays live in dimension d ≥ 2"));
        }
        let dir = primitive_direction(&dir)?;
        Ok(Ray { base, dir })
    }

    pub fn through(point: &LatticePoint, dir: Vec<i64>) -> Result<Self> {
        Self::new(point.to_rational(), dir)
    }

    pub fn dim(&self) -> usize {
        self.dir.len()
    }

    pub fn base(&self) -> &[Rational] {
        &self.base
    }

    pub fn dir(&self) -> &[i64] {
        &self.dir
    }

    pub fn dir_norm_sq(&self) -> i64 {
        self.dir.iter().map(|c| c * c).sum()
    }

    pub fn dir_norm(&self) -> f64 {
        libm::sqrt(self.dir_norm_sq() as f64)
    }

    /// Unit direction as floats.
    pub fn unit_dir(&self) -> Vec<f64> {
        let norm = self.dir_norm();
        self.dir.iter().map(|&c| c as f64 / norm).collect()
    }

    pub fn base_f64(&self) -> Vec<f64> {
        self.base.iter().map(rational_to_f64).collect()
    }

    /// Same line, opposite orientation.
    pub fn reversed(&self) -> Ray {
        Ray { base: self.base.clone(), dir: self.dir.iter().map(|c| -c).collect() }
    }

    pub fn point_at(&self, t: &Rational) -> Vec<Rational> {
        self.base.iter().zip(&self.dir).map(|(b, &d)| b + t * rational_from_int(d)).collect()
    }

    /// Parameter of the orthogonal projection of `p` onto the line.
    pub fn project(&self, p: &[Rational]) -> Rational {
        let dot: Rational = p
            .iter()
            .zip(&self.base)
            .zip(&self.dir)
            .map(|((x, b), &d)| (x - b) * rational_from_int(d))
            .fold(Rational::zero(), |acc, v| acc + v);
        dot / rational_from_int(self.dir_norm_sq())
    }

    /// Exact squared Euclidean distance from `p` to the line.
    pub fn dist_sq(&self, p: &[Rational]) -> Rational {
        let t = self.project(p);
        self.point_at(&t)
            .iter()
            .zip(p)
            .map(|(a, b)| {
                let diff = a - b;
                &diff * &diff
            })
            .fold(Rational::zero(), |acc, v| acc + v)
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "base=(")?;
        for (i, b) in self.base.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rational(b))?;
        }
        write!(f, ") dir=(")?;
        for (i, c) in self.dir.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn floor_to_i64(q: &Rational) -> i64 {
    q.floor().to_integer().to_i64().expect("coordinate out of i64 range")
}

pub(crate) fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub(crate) fn abs(q: &Rational) -> Rational {
    q.abs()
}

pub(crate) fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &c| g.gcd(&c))
}
