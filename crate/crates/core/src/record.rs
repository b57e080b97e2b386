//! In-memory run record: diagnostics time series, snapshots, final state.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::thermo::State;

/// One row of the diagnostics time series. Energy columns are `None`
/// until enough history exists for the time derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagRow {
    pub t: f64,
    pub theta_sq_min: f64,
    pub vel_sup_ratio: f64,
    pub baryon_residual: f64,
    pub energy: Option<EnergyColumns>,
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyColumns {
    pub total: f64,
    pub e_u: f64,
    pub e_v: f64,
    pub e_w: f64,
}

/// Nodal fields at an output time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub x: Vec<f64>,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub rho: Vec<f64>,
    pub n: Vec<f64>,
}

/// Why a run stopped before `t_end`.
#[derive(Debug, Clone, PartialEq)]
pub struct Abort {
    pub message: String,
    pub node: Option<usize>,
    pub t: f64,
}

impl Abort {
    pub fn from_error(e: &Error, t: f64) -> Self {
        let node = match e {
            Error::Superluminal { node, .. }
            | Error::PositivityLoss { node, .. }
            | Error::DensityBreakdown { node, .. }
            | Error::ShellCrossing { node, .. }
            | Error::NonFinite { node, .. } => Some(*node),
            _ => None,
        };
        Self {
            message: e.to_string(),
            node,
            t,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub meta: BTreeMap<String, String>,
    pub rows: Vec<DiagRow>,
    pub snapshots: Vec<Snapshot>,
    pub final_state: State,
    pub abort: Option<Abort>,
    pub steps: usize,
}

impl RunRecord {
    pub fn completed(&self) -> bool {
        self.abort.is_none()
    }

    pub fn max_vel_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.vel_sup_ratio).fold(0.0, f64::max)
    }

    pub fn min_theta_sq(&self) -> f64 {
        self.rows.iter().map(|r| r.theta_sq_min).fold(f64::INFINITY, f64::min)
    }
}
