//! Error type shared by the solver modules.

use thiserror::Error;

/// Everything that can go wrong while building data, evaluating the
/// right-hand sides, or stepping the solver.
///
/// Solver-side variants carry the node index and the time at which the
/// problem was detected so that a sweep report can point at the culprit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input shape mismatch: expected {expected} nodal values, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("inadmissible data: {0}")]
    Inadmissible(String),

    #[error("superluminal state at node {node} (t = {t}): |v|^2/c^2 = {ratio}")]
    Superluminal { node: usize, t: f64, ratio: f64 },

    #[error("positivity lost at node {node} (t = {t}): {what} = {value}")]
    PositivityLoss {
        node: usize,
        t: f64,
        what: &'static str,
        value: f64,
    },

    #[error("relativistic density bracket non-positive at node {node} (t = {t}): {value}")]
    DensityBreakdown { node: usize, t: f64, value: f64 },

    #[error("shell crossing at node {node} (t = {t}): r_x = {rx}")]
    ShellCrossing { node: usize, t: f64, rx: f64 },

    #[error("non-finite value in field `{field}` at node {node} (t = {t})")]
    NonFinite {
        field: &'static str,
        node: usize,
        t: f64,
    },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for the variants that signal the solver left its regime of
    /// validity (as opposed to bad input or plumbing failures).
    pub fn is_solver_abort(&self) -> bool {
        matches!(
            self,
            Error::Superluminal { .. }
                | Error::PositivityLoss { .. }
                | Error::DensityBreakdown { .. }
                | Error::ShellCrossing { .. }
                | Error::NonFinite { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
