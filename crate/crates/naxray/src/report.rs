use std::time::Duration;

use naxray_core::LatticeField;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct CellResidual {
    pub z: Vec<i64>,
    pub residual: f64,
}

/// Summary of a reconstruction or verification run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub format: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measurements: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<CellResidual>,
    pub wall_time_s: f64,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { format: crate::json::FORMAT.into(), command: command.into(), ..Report::default() }
    }

    /// Fills in per-cell and maximal Frobenius residuals against `truth`.
    pub fn with_truth(mut self, recovered: &LatticeField, truth: &LatticeField) -> Self {
        self.residuals =
            recovered.residuals(truth).into_iter().map(|(z, residual)| CellResidual { z: z.0, residual }).collect();
        self.max_residual = Some(self.residuals.iter().map(|c| c.residual).fold(0.0, f64::max));
        self
    }

    pub fn with_wall_time(mut self, elapsed: Duration) -> Self {
        self.wall_time_s = elapsed.as_secs_f64();
        self
    }
}
