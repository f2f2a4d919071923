//! The work behind each subcommand, callable without touching files.

use std::time::Instant;

use naxray_core::geometry::build_gamma_r_plan;
use naxray_core::reconstruction::{
    self, irrational_rays, layer_rays, reconstruct_irrational, reconstruct_layers_discrete, reconstruct_star, Annulus,
    Reconstruction, StarOptions,
};
use naxray_core::transforms::{discrete_xray, star_transform};
use naxray_core::{GammaRPlan, LatticeField, Mat, Ray, Regime, Sinogram, SinogramMeta, TransformKind};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::json::{self, FieldDoc, MatDoc, RayDoc};
use crate::phantom::{phantom, PhantomSpec};
use crate::report::Report;

/// Ray family and inversion to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    /// One irrational-slope ray per lattice point.
    Irrational,
    /// Layer stripping along the rays `γ_z`.
    Layers,
    /// Cell-chord data on the rays of a plan.
    Star,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Irrational => "irrational",
            Method::Layers => "layers",
            Method::Star => "star",
        }
    }

    pub fn transform_kind(self) -> TransformKind {
        match self {
            Method::Irrational | Method::Layers => TransformKind::Discrete,
            Method::Star => TransformKind::Star,
        }
    }

    /// Discrete methods invert multiplicative fields, the cell-chord method additive ones.
    pub fn regime(self) -> Regime {
        match self {
            Method::Irrational | Method::Layers => Regime::Multiplicative,
            Method::Star => Regime::Additive,
        }
    }
}

pub fn validate_shape(d: usize, n: usize, r: f64) -> CliResult<()> {
    if d < 2 {
        return Err(CliError::usage(format!("--d must be at least 2, got {d}")));
    }
    if n < 1 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(CliError::usage(format!("--r must be positive, got {r}")));
    }
    Ok(())
}

fn check_annulus(method: Method, annulus: Option<&Annulus>) -> CliResult<()> {
    if annulus.is_some() && method != Method::Layers {
        return Err(CliError::usage(format!("--annulus applies to --method layers, not {}", method.name())));
    }
    Ok(())
}

fn required_plan(method: Method, plan: Option<&GammaRPlan>) -> CliResult<Option<&GammaRPlan>> {
    match (method, plan) {
        (Method::Star, None) => Err(CliError::usage("--method star needs --plan")),
        (Method::Star, p) => Ok(p),
        (_, Some(_)) => Err(CliError::usage(format!("--plan applies to --method star, not {}", method.name()))),
        (_, None) => Ok(None),
    }
}

pub fn make_phantom(method: Method, d: usize, n: usize, r: f64, m_bound: f64, seed: u64) -> CliResult<LatticeField> {
    validate_shape(d, n, r)?;
    if !(m_bound > 0.0 && m_bound.is_finite()) {
        return Err(CliError::usage(format!("--M must be positive, got {m_bound}")));
    }
    phantom(&PhantomSpec { d, n, r, regime: method.regime(), m_bound, seed })
}

pub fn make_plan(r: f64, m_bound: f64, d: usize) -> CliResult<GammaRPlan> {
    validate_shape(d, 1, r)?;
    let plan = build_gamma_r_plan(r, m_bound, d)?;
    plan.check_invariants()?;
    Ok(plan)
}

/// The rays a method reads, in a fixed order.
pub fn forward_rays(
    method: Method,
    field: &LatticeField,
    plan: Option<&GammaRPlan>,
    annulus: Option<&Annulus>,
) -> CliResult<Vec<Ray>> {
    check_annulus(method, annulus)?;
    let plan = required_plan(method, plan)?;
    Ok(match method {
        Method::Irrational => irrational_rays(field.ball(), field.d())?,
        Method::Layers => layer_rays(field.ball(), field.d(), annulus)?,
        Method::Star => {
            let plan = plan.expect("checked above");
            if plan.d != field.d() || plan.r != field.r() {
                return Err(CliError::usage(format!(
                    "plan is for d = {}, r = {} but the field has d = {}, r = {}",
                    plan.d,
                    plan.r,
                    field.d(),
                    field.r()
                )));
            }
            plan.rays().cloned().collect()
        }
    })
}

/// Runs `f` on a pool of `threads` workers; 0 means one per logical processor.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {threads} worker threads: {e}")))?;
    Ok(pool.install(f))
}

/// Forward projection of `field` on the ray family of `method`.
pub fn forward(
    field: &LatticeField,
    method: Method,
    plan: Option<&GammaRPlan>,
    annulus: Option<&Annulus>,
    threads: usize,
) -> CliResult<Sinogram> {
    let rays = forward_rays(method, field, plan, annulus)?;
    let transform = |ray: &Ray| match method {
        Method::Irrational | Method::Layers => discrete_xray(field, ray),
        Method::Star => star_transform(field, ray),
    };
    let values: Vec<Mat> = with_threads(threads, || rays.par_iter().map(transform).collect::<Result<_, _>>())??;

    let plan_id = match plan {
        Some(p) if method == Method::Star => Some(json::plan_id(p)?),
        _ => None,
    };
    let meta =
        SinogramMeta { d: field.d(), n: field.n(), r: field.r(), transform_kind: method.transform_kind(), plan_id };
    let mut sino = Sinogram::new(meta);
    for (ray, value) in rays.into_iter().zip(values) {
        sino.insert(ray, value)?;
    }
    Ok(sino)
}

/// Inverts `sino` and, with `truth`, reports per-cell residuals.
pub fn reconstruct(
    sino: &Sinogram,
    method: Method,
    plan: Option<&GammaRPlan>,
    annulus: Option<&Annulus>,
    truth: Option<&LatticeField>,
) -> CliResult<(Reconstruction, Report)> {
    check_annulus(method, annulus)?;
    let plan = required_plan(method, plan)?;
    let meta = sino.meta();
    if meta.transform_kind != method.transform_kind() {
        return Err(CliError::usage(format!(
            "--method {} needs {} data, the sinogram holds {}",
            method.name(),
            method.transform_kind(),
            meta.transform_kind
        )));
    }
    let start = Instant::now();
    let rec = match method {
        Method::Irrational => reconstruct_irrational(sino, meta.r)?,
        Method::Layers => reconstruct_layers_discrete(sino, meta.r, annulus)?,
        Method::Star => {
            let plan = plan.expect("checked above");
            let id = json::plan_id(plan)?;
            if let Some(stamped) = &meta.plan_id {
                if *stamped != id {
                    return Err(CliError::usage(format!("sinogram was taken with plan {stamped}, not {id}")));
                }
            }
            if plan.d != meta.d || plan.r != meta.r {
                return Err(CliError::usage(format!(
                    "plan is for d = {}, r = {} but the sinogram has d = {}, r = {}",
                    plan.d, plan.r, meta.d, meta.r
                )));
            }
            reconstruct_star(sino, plan, StarOptions::default())?
        }
    };
    let mut report = Report::new("reconstruct").with_wall_time(start.elapsed());
    report.method = Some(method.name().into());
    report.measurements = Some(rec.measurements);
    report.layers = Some(rec.layers);
    if let Some(truth) = truth {
        let truth = match annulus {
            Some(a) => truth.restricted(|z| a.contains(z)),
            None => truth.clone(),
        };
        report = report.with_truth(&rec.field, &truth);
    }
    Ok((rec, report))
}

/// Compares two fields point by point.
pub fn compare_fields(field: &LatticeField, other: &LatticeField) -> CliResult<Report> {
    if field.d() != other.d() || field.n() != other.n() || field.regime() != other.regime() {
        return Err(CliError::usage(format!(
            "cannot compare a {}-dimensional order-{} {} field with a {}-dimensional order-{} {} field",
            field.d(),
            field.n(),
            json::regime_name(field.regime()),
            other.d(),
            other.n(),
            json::regime_name(other.regime())
        )));
    }
    Ok(Report::new("verify").with_truth(field, other))
}

/// Re-projects `field` on every ray of `sino` and reports the largest discrepancy.
pub fn replay(field: &LatticeField, sino: &Sinogram) -> CliResult<Report> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (ray, value) in sino.iter() {
        let again = match sino.meta().transform_kind {
            TransformKind::Discrete => discrete_xray(field, ray)?,
            TransformKind::Star => star_transform(field, ray)?,
            TransformKind::ContinuousDelta => {
                return Err(CliError::usage(
                    "replaying regularized-delta data needs the delta field, not a lattice field",
                ))
            }
        };
        worst = worst.max(again.dist(value));
    }
    let mut report = Report::new("verify").with_wall_time(start.elapsed());
    report.measurements = Some(sino.len());
    report.max_residual = Some(worst);
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleDoc {
    pub format: String,
    pub k: i64,
    /// Chord of the single ray through the single cell.
    pub chord: f64,
    pub ray: RayDoc,
    pub f1: FieldDoc,
    pub f2: FieldDoc,
    /// The shared transform value.
    pub transform: MatDoc,
    /// Frobenius distance between the two transform values.
    pub transform_gap: f64,
}

pub fn counterexample(k: i64, r: f64, m_bound: f64) -> CliResult<CounterexampleDoc> {
    if !(r > 0.0 && r < 1.0) {
        return Err(CliError::usage(format!("the counterexample lives on a single cell: need 0 < --r < 1, got {r}")));
    }
    let plan = make_plan(r, m_bound, 2)?;
    let c = reconstruction::counterexample(k, &plan)?;
    Ok(CounterexampleDoc {
        format: json::FORMAT.into(),
        k,
        chord: c.chord,
        ray: json::ray_to_doc(&c.ray),
        f1: json::field_to_doc(&c.f1),
        f2: json::field_to_doc(&c.f2),
        transform: json::mat_to_doc(&c.s1),
        transform_gap: c.s1.dist(&c.s2),
    })
}
