//! Measured transform data and the providers the inversions read from.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;

use core::fmt;
use core::str::FromStr;

use crate::geometry::Ray;
use crate::{Error, Mat, Result};

/// Which forward transform produced a sinogram.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    /// Discrete lattice transform.
    Discrete,
    /// Cell-chord transform of a piecewise-constant field.
    Star,
    /// Continuous transform of a regularized-delta field.
    ContinuousDelta,
}

impl TransformKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TransformKind::Discrete => "S_dis",
            TransformKind::Star => "S_star",
            TransformKind::ContinuousDelta => "S_con_delta",
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S_dis" => Ok(TransformKind::Discrete),
            "S_star" => Ok(TransformKind::Star),
            "S_con_delta" => Ok(TransformKind::ContinuousDelta),
            other => Err(Error::invalid(format!("unknown transform kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SinogramMeta {
    pub d: usize,
    pub n: usize,
    pub r: f64,
    pub transform_kind: TransformKind,
    pub plan_id: Option<String>,
}

/// Transform values keyed by exact ray.
#[derive(Clone, Debug, PartialEq)]
pub struct Sinogram {
    meta: SinogramMeta,
    rays: BTreeMap<Ray, Mat>,
}

impl Sinogram {
    pub fn new(meta: SinogramMeta) -> Self {
        Sinogram { meta, rays: BTreeMap::new() }
    }

    pub fn meta(&self) -> &SinogramMeta {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut SinogramMeta {
        &mut self.meta
    }

    /// Adds a record; duplicate rays and mismatched shapes are rejected.
    pub fn insert(&mut self, ray: Ray, value: Mat) -> Result<()> {
        if ray.dim() != self.meta.d {
            return Err(Error::invalid(format!("ray {ray} is not in dimension {}", self.meta.d)));
        }
        if value.n() != self.meta.n {
            return Err(Error::invalid(format!(
                "value for ray {ray} has order {}, expected {}",
                value.n(),
                self.meta.n
            )));
        }
        if self.rays.contains_key(&ray) {
            return Err(Error::invalid(format!("duplicate ray {ray}")));
        }
        self.rays.insert(ray, value);
        Ok(())
    }

    pub fn get(&self, ray: &Ray) -> Option<&Mat> {
        self.rays.get(ray)
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ray, &Mat)> {
        self.rays.iter()
    }
}

/// A source of transform values, one ray at a time.
pub trait Measurements {
    fn d(&self) -> usize;
    fn n(&self) -> usize;
    fn r(&self) -> f64;
    fn measure(&self, ray: &Ray) -> Result<Mat>;
}

impl Measurements for Sinogram {
    fn d(&self) -> usize {
        self.meta.d
    }

    fn n(&self) -> usize {
        self.meta.n
    }

    fn r(&self) -> f64 {
        self.meta.r
    }

    fn measure(&self, ray: &Ray) -> Result<Mat> {
        self.rays.get(ray).cloned().ok_or_else(|| Error::MissingRay(format!("{ray}")))
    }
}

impl<M: Measurements + ?Sized> Measurements for &M {
    fn d(&self) -> usize {
        (**self).d()
    }

    fn n(&self) -> usize {
        (**self).n()
    }

    fn r(&self) -> f64 {
        (**self).r()
    }

    fn measure(&self, ray: &Ray) -> Result<Mat> {
        (**self).measure(ray)
    }
}

/// Measurements computed on demand, typically a forward transform of a known field.
pub struct Synthetic<F> {
    d: usize,
    n: usize,
    r: f64,
    forward: F,
}

impl<F> Synthetic<F>
where
    F: Fn(&Ray) -> Result<Mat>,
{
    pub fn new(d: usize, n: usize, r: f64, forward: F) -> Self {
        Synthetic { d, n, r, forward }
    }
}

impl<F> Measurements for Synthetic<F>
where
    F: Fn(&Ray) -> Result<Mat>,
{
    fn d(&self) -> usize {
        self.d
    }

    fn n(&self) -> usize {
        self.n
    }

    fn r(&self) -> f64 {
        self.r
    }

    fn measure(&self, ray: &Ray) -> Result<Mat> {
        (self.forward)(ray)
    }
}
