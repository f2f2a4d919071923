//! Matrix-valued fields on `Z^d` with finite support in a ball.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::geometry::{Ball, LatticePoint};
use crate::{Error, Mat, Result};

/// How unstored lattice points are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// Values are invertible and the field is the identity off its support.
    Multiplicative,
    /// Values are arbitrary and the field is zero off its support.
    Additive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeField {
    d: usize,
    n: usize,
    ball: Ball,
    regime: Regime,
    m_bound: Option<f64>,
    values: BTreeMap<LatticePoint, Mat>,
}

impl LatticeField {
    pub fn new(d: usize, n: usize, r: f64, regime: Regime) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!("dimension must be at least 2, got {d}")));
        }
        if n == 0 {
            return Err(Error::domain("matrix order must be at least 1"));
        }
        Ok(LatticeField { d, n, ball: Ball::new(r)?, regime, m_bound: None, values: BTreeMap::new() })
    }

    pub fn from_values<I>(d: usize, n: usize, r: f64, regime: Regime, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LatticePoint, Mat)>,
    {
        let mut field = Self::new(d, n, r, regime)?;
        for (z, m) in values {
            field.insert(z, m)?;
        }
        Ok(field)
    }

    /// Scalar (`n = 1`) field from complex values.
    pub fn scalar<I>(d: usize, r: f64, regime: Regime, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LatticePoint, Complex64)>,
    {
        Self::from_values(d, 1, r, regime, values.into_iter().map(|(z, v)| (z, Mat::scalar(v))))
    }

    /// Attaches a Frobenius-norm bound `M` on all values (additive regime).
    pub fn with_bound(mut self, m: f64) -> Result<Self> {
        if self.regime != Regime::Additive {
            return Err(Error::invalid("a norm bound applies to additive fields only"));
        }
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::domain(format!("norm bound must be positive, got {m}")));
        }
        if let Some((z, v)) = self.values.iter().find(|(_, v)| v.frobenius_norm() > m) {
            return Err(Error::domain(format!("value at {z} has norm {} above the bound {m}", v.frobenius_norm())));
        }
        self.m_bound = Some(m);
        Ok(self)
    }

    pub fn insert(&mut self, z: LatticePoint, m: Mat) -> Result<()> {
        if z.dim() != self.d {
            return Err(Error::invalid(format!("point {z} is not in dimension {}", self.d)));
        }
        if m.n() != self.n {
            return Err(Error::invalid(format!("value at {z} has order {}, field has order {}", m.n(), self.n)));
        }
        if !self.ball.contains(&z) {
            return Err(Error::invalid(format!("point {z} lies outside B_r, r = {}", self.ball.radius())));
        }
        match self.regime {
            Regime::Multiplicative => {
                if m.det().norm() == 0.0 {
                    return Err(Error::domain(format!("value at {z} is singular")));
                }
            }
            Regime::Additive => {
                if let Some(bound) = self.m_bound {
                    if m.frobenius_norm() > bound {
                        return Err(Error::domain(format!("value at {z} exceeds the norm bound {bound}")));
                    }
                }
            }
        }
        self.values.insert(z, m);
        Ok(())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> f64 {
        self.ball.radius()
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn m_bound(&self) -> Option<f64> {
        self.m_bound
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, z: &LatticePoint) -> Option<&Mat> {
        self.values.get(z)
    }

    /// The identity (multiplicative) or zero (additive) matrix.
    pub fn default_value(&self) -> Mat {
        match self.regime {
            Regime::Multiplicative => Mat::identity(self.n),
            Regime::Additive => Mat::zeros(self.n),
        }
    }

    /// Value at `z`, falling back to the regime's default off the support.
    pub fn value_at(&self, z: &LatticePoint) -> Mat {
        self.values.get(z).cloned().unwrap_or_else(|| self.default_value())
    }

    /// Scalar value at `z` for `n = 1` fields.
    pub fn scalar_at(&self, z: &LatticePoint) -> Complex64 {
        debug_assert_eq!(self.n, 1);
        self.value_at(z).get(0, 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &Mat)> {
        self.values.iter()
    }

    /// Per-point Frobenius residuals against `other` over the union of both supports.
    pub fn residuals(&self, other: &LatticeField) -> Vec<(LatticePoint, f64)> {
        let points: BTreeSet<&LatticePoint> = self.values.keys().chain(other.values.keys()).collect();
        points.into_iter().map(|z| (z.clone(), self.value_at(z).dist(&other.value_at(z)))).collect()
    }

    pub fn max_residual(&self, other: &LatticeField) -> f64 {
        self.residuals(other).into_iter().map(|(_, r)| r).fold(0.0, f64::max)
    }

    /// Keeps only the points selected by `keep`.
    pub fn restricted(&self, mut keep: impl FnMut(&LatticePoint) -> bool) -> LatticeField {
        LatticeField {
            values: self.values.iter().filter(|(z, _)| keep(z)).map(|(z, m)| (z.clone(), m.clone())).collect(),
            ..self.clone()
        }
    }
}
