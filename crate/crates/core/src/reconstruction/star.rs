use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::Reconstruction;
use crate::geometry::{GammaRPlan, LatticePoint, PlanEntry};
use crate::{Error, LatticeField, Mat, Measurements, Regime, Result};

/// How `exp(Λ f(z))` is inverted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LogMode {
    /// Principal matrix logarithm by its power series; needs `‖A − I‖_F < 1`.
    #[default]
    Series,
    /// Real logarithm of a positive scalar, for real fields with `n = 1`.
    RealScalar,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StarOptions {
    pub log: LogMode,
    /// Recover only layers `1..=max_layer`, reading only their rays.
    pub max_layer: Option<usize>,
}

fn log_of(a: &Mat, mode: LogMode, z: &LatticePoint) -> Result<Mat> {
    match mode {
        LogMode::Series => a.log(),
        LogMode::RealScalar => {
            let v = a.get(0, 0);
            if a.n() != 1 || v.re.is_nan() || v.re <= 0.0 {
                return Err(Error::domain(format!("value at {z} is not a positive scalar: {v}")));
            }
            Ok(Mat::scalar(Complex64::new(libm::log(v.re), 0.0)))
        }
    }
}

fn recover(entry: &PlanEntry, value: &Mat, known: &BTreeMap<LatticePoint, Mat>, mode: LogMode) -> Result<Mat> {
    let n = value.n();
    let own = entry
        .chords
        .iter()
        .position(|c| c.cell == entry.z)
        .ok_or_else(|| Error::invalid(format!("plan ray for {} misses its cell", entry.z)))?;
    let factor = |k: usize| -> Result<Mat> {
        let c = &entry.chords[k];
        let f = known
            .get(&c.cell)
            .ok_or_else(|| Error::invalid(format!("plan ray for {} crosses unrecovered cell {}", entry.z, c.cell)))?;
        Ok(f.scale_real(c.length).exp())
    };
    let mut before = Mat::identity(n);
    for k in 0..own {
        before = &factor(k)? * &before;
    }
    let mut after = Mat::identity(n);
    for k in own + 1..entry.chords.len() {
        after = &factor(k)? * &after;
    }
    let a = &(&after.inv()? * value) * &before.inv()?;
    Ok(log_of(&a, mode, &entry.z)?.scale_real(1.0 / entry.chords[own].length))
}

/// Layer stripping from cell-chord data on the plan's rays.
///
/// For each entry, `Λ(z,z) f(z) = log( after^{-1} · S(γ) · before^{-1} )` where
/// `after` and `before` collect `exp(Λ(z,ζ) f(ζ))` over the already-recovered
/// cells crossed after and before `U_z`.
pub fn reconstruct_star<M: Measurements + ?Sized>(
    data: &M,
    plan: &GammaRPlan,
    options: StarOptions,
) -> Result<Reconstruction> {
    if data.d() != plan.d {
        return Err(Error::invalid("provider and plan have different dimensions"));
    }
    if options.log == LogMode::RealScalar && data.n() != 1 {
        return Err(Error::invalid("the real logarithm needs n = 1"));
    }
    let limit = options.max_layer.unwrap_or(usize::MAX);
    let mut order: Vec<&PlanEntry> = plan.entries.iter().filter(|e| e.layer <= limit).collect();
    order.sort_by_key(|e| e.layer);

    let mut known = BTreeMap::new();
    let mut measurements = 0;
    let mut layers = 0;
    for entry in order {
        let value = data.measure(&entry.ray)?;
        measurements += 1;
        layers = layers.max(entry.layer);
        let f = recover(entry, &value, &known, options.log).map_err(|e| {
            e.context(format_args!("recovering {} (layer {}) from ray {}", entry.z, entry.layer, entry.ray))
        })?;
        known.insert(entry.z.clone(), f);
    }

    let mut field = LatticeField::new(plan.d, data.n(), plan.r, Regime::Additive)?;
    for (z, f) in known {
        if !f.is_zero() {
            field.insert(z, f)?;
        }
    }
    Ok(Reconstruction { field, measurements, layers })
}
