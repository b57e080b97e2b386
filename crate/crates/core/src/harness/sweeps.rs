//! Parameter sweeps and rate fits.
//!
//! Every member of a sweep is integrated with the same fixed time step,
//! taken from the stiffest member at t = 0, so that time-discretization
//! error cancels in the differences. Members run in parallel and results
//! are gathered by member index.

use rayon::prelude::*;

use super::config::Config;
use crate::diagnostics::{weighted_norm, BaseWeight, Weight};
use crate::dynamics::{advance, steps_for, Mode, Model, RunOptions, StepControl};
use crate::error::{Error, Result};
use crate::grid::deriv;
use crate::thermo::{InitialData, LightSpeed, State};

/// Fraction of the initial stable step used for the shared fixed step;
/// wave speeds grow during a run.
pub const DT_SAFETY: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    LightSpeed,
    Viscosity,
    Refinement,
    Stability,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::LightSpeed => "light-speed",
            SweepKind::Viscosity => "viscosity",
            SweepKind::Refinement => "refinement",
            SweepKind::Stability => "stability",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareNorm {
    Sup,
    /// L² weighted by α₀ = ρ₀x.
    WeightedL2,
}

impl std::str::FromStr for CompareNorm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sup" => Ok(CompareNorm::Sup),
            "weighted-l2" => Ok(CompareNorm::WeightedL2),
            other => Err(Error::Config(format!("unknown norm `{other}` (sup | weighted-l2)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub values: Vec<f64>,
    pub base: Config,
    pub horizon: f64,
    pub norm: CompareNorm,
}

impl SweepSpec {
    pub fn new(kind: SweepKind, values: Vec<f64>, base: Config, horizon: f64) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::Config(format!(
                "a {} sweep needs at least 3 values, got {}",
                kind.name(),
                values.len()
            )));
        }
        let up = values.windows(2).all(|w| w[1] > w[0]);
        let down = values.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(Error::Config("sweep values must be strictly monotone".into()));
        }
        if !(horizon > 0.0) {
            return Err(Error::Config(format!("horizon must be positive, got {horizon}")));
        }
        Ok(Self {
            kind,
            values,
            base,
            horizon,
            norm: CompareNorm::Sup,
        })
    }

    pub fn with_norm(mut self, norm: CompareNorm) -> Self {
        self.norm = norm;
        self
    }
}

/// Least-squares line through (log p, log e).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogFit {
    pub slope: f64,
    pub intercept: f64,
    /// RMS of the log-space residuals.
    pub residual: f64,
}

pub fn fit_loglog(pairs: &[(f64, f64)]) -> Result<LogFit> {
    if pairs.len() < 2 {
        return Err(Error::Domain("a log-log fit needs at least two points".into()));
    }
    if let Some(&(p, e)) = pairs.iter().find(|(p, e)| !(*p > 0.0 && *e > 0.0)) {
        return Err(Error::Domain(format!("log-log fit needs positive pairs, got ({p}, {e})")));
    }
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("log-log fit needs distinct parameters".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(LogFit {
        slope,
        intercept,
        residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub kind: SweepKind,
    pub parameter: &'static str,
    pub pairs: Vec<(f64, f64)>,
    pub fit: Option<LogFit>,
    pub target: (f64, f64),
    /// Members that aborted, with the reason.
    pub failures: Vec<(f64, String)>,
    pub pass: bool,
}

impl RateReport {
    fn build(kind: SweepKind, parameter: &'static str, pairs: Vec<(f64, f64)>, target: (f64, f64), failures: Vec<(f64, String)>) -> Self {
        let fit = fit_loglog(&pairs).ok();
        let pass = failures.is_empty()
            && fit.is_some_and(|f| f.slope.is_finite() && f.slope >= target.0 && f.slope <= target.1);
        Self {
            kind,
            parameter,
            pairs,
            fit,
            target,
            failures,
            pass,
        }
    }

    pub fn slope(&self) -> Option<f64> {
        self.fit.map(|f| f.slope)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("kind = {}\nparameter = {}\n", self.kind.name(), self.parameter);
        out.push_str(&format!("# {:>14} {:>24}\n", self.parameter, "error"));
        for (p, e) in &self.pairs {
            out.push_str(&format!("{p:>16} {e:>24e}\n"));
        }
        match self.fit {
            Some(f) => out.push_str(&format!(
                "slope = {}\nintercept = {}\nresidual = {}\n",
                f.slope, f.intercept, f.residual
            )),
            None => out.push_str("slope = none\n"),
        }
        out.push_str(&format!("target = [{}, {}]\n", self.target.0, self.target.1));
        for (p, why) in &self.failures {
            out.push_str(&format!("failed {} = {p}: {why}\n", self.parameter));
        }
        out.push_str(&format!("pass = {}\n", self.pass));
        out
    }
}

/// Result of one member run.
type Member = std::result::Result<State, String>;

fn run_fixed(model: &Model, t_end: f64, n_steps: usize) -> Member {
    let opts = RunOptions::new(t_end, t_end).fixed(n_steps).lean();
    match advance(model, model.initial_state(), &opts) {
        Ok((s, rec)) => match rec.abort {
            None => Ok(s),
            Some(a) => Err(a.message),
        },
        Err(e) => Err(e.to_string()),
    }
}

fn initial_dt(model: &Model) -> Result<f64> {
    let k = model.rhs(&model.initial_state())?;
    Ok(StepControl::new(model, &k).dt)
}

fn shared_steps(models: &[&Model], horizon: f64) -> Result<usize> {
    let mut dt = f64::INFINITY;
    for m in models {
        dt = dt.min(initial_dt(m)?);
    }
    Ok(steps_for(horizon, DT_SAFETY * dt))
}

fn field_distance(a: &[f64], b: &[f64], norm: CompareNorm, model: &Model) -> Result<f64> {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    match norm {
        CompareNorm::Sup => Ok(diff.iter().map(|v| v.abs()).fold(0.0, f64::max)),
        CompareNorm::WeightedL2 => weighted_norm(
            &diff,
            &Weight::plain(BaseWeight::Alpha0),
            &model.init.rho0,
            &model.grid,
        ),
    }
}

/// Largest distance over u, υ, ω, r and r_x.
pub fn state_distance(a: &State, b: &State, norm: CompareNorm, model: &Model) -> Result<f64> {
    let grid = &model.grid;
    let mut worst = 0.0f64;
    for (x, y) in [(&a.u, &b.u), (&a.v, &b.v), (&a.w, &b.w), (&a.r, &b.r)] {
        worst = worst.max(field_distance(x, y, norm, model)?);
    }
    let rxa = deriv(&a.r, grid)?;
    let rxb = deriv(&b.r, grid)?;
    Ok(worst.max(field_distance(&rxa, &rxb, norm, model)?))
}

fn with_horizon(cfg: &Config, horizon: f64) -> Config {
    Config {
        t_end: horizon,
        ..cfg.clone()
    }
}

/// Error of finite-c runs against the infinite-c reference at the horizon;
/// target slope in [−2.3, −1.7].
pub fn limit_sweep(spec: &SweepSpec) -> Result<RateReport> {
    let base = with_horizon(&spec.base, spec.horizon);
    let reference = Model::new(
        base.grid()?,
        base.initial_data(&base.grid()?)?,
        crate::thermo::PhysParams::new(LightSpeed::Infinite, base.gamma, base.mu, base.cfl)?,
        Mode::Classical,
    )?;
    let models: Vec<Result<Model>> = spec
        .values
        .iter()
        .map(|&c| {
            let cfg = Config {
                mode: Mode::Relativistic,
                c: LightSpeed::Finite(c),
                ..base.clone()
            };
            cfg.model()
        })
        .collect();
    let mut stiff: Vec<&Model> = models.iter().filter_map(|m| m.as_ref().ok()).collect();
    stiff.push(&reference);
    let n_steps = shared_steps(&stiff, spec.horizon)?;

    let runs: Vec<Member> = models
        .par_iter()
        .map(|m| match m {
            Ok(m) => run_fixed(m, spec.horizon, n_steps),
            Err(e) => Err(e.to_string()),
        })
        .collect();
    let reference_state = run_fixed(&reference, spec.horizon, n_steps)
        .map_err(|e| Error::Domain(format!("classical reference run failed: {e}")))?;

    let mut pairs = Vec::new();
    let mut failures = Vec::new();
    for (&c, run) in spec.values.iter().zip(runs) {
        match run {
            Ok(s) => pairs.push((c, state_distance(&s, &reference_state, spec.norm, &reference)?)),
            Err(e) => failures.push((c, e)),
        }
    }
    Ok(RateReport::build(SweepKind::LightSpeed, "c", pairs, (-2.3, -1.7), failures))
}

/// ‖u_μ − u_0‖ at the horizon; target slope in [0.7, 1.3].
pub fn viscosity_sweep(spec: &SweepSpec) -> Result<RateReport> {
    let base = with_horizon(&spec.base, spec.horizon);
    let model_for = |mu: f64| Config { mu, ..base.clone() }.model();
    let reference = model_for(0.0)?;
    let models: Vec<Result<Model>> = spec.values.iter().map(|&mu| model_for(mu)).collect();
    let mut stiff: Vec<&Model> = models.iter().filter_map(|m| m.as_ref().ok()).collect();
    stiff.push(&reference);
    let n_steps = shared_steps(&stiff, spec.horizon)?;
    let runs: Vec<Member> = models
        .par_iter()
        .map(|m| match m {
            Ok(m) => run_fixed(m, spec.horizon, n_steps),
            Err(e) => Err(e.to_string()),
        })
        .collect();
    let reference_state = run_fixed(&reference, spec.horizon, n_steps)
        .map_err(|e| Error::Domain(format!("inviscid reference run failed: {e}")))?;
    let mut pairs = Vec::new();
    let mut failures = Vec::new();
    for (&mu, run) in spec.values.iter().zip(runs) {
        match run {
            Ok(s) => pairs.push((mu, field_distance(&s.u, &reference_state.u, spec.norm, &reference)?)),
            Err(e) => failures.push((mu, e)),
        }
    }
    Ok(RateReport::build(SweepKind::Viscosity, "mu", pairs, (0.7, 1.3), failures))
}

/// Richardson study over grids whose cell counts grow by integer factors,
/// with the time step refined in proportion. Pairs are
/// (h, ‖u_h − u_{h/k}‖) on the coarse nodes; the fitted slope is the
/// observed order, target [1.7, 2.3].
pub fn refinement_study(spec: &SweepSpec) -> Result<RateReport> {
    let base = with_horizon(&spec.base, spec.horizon);
    let mut cells: Vec<usize> = Vec::new();
    for &v in &spec.values {
        if !(v >= 4.0 && v.fract() == 0.0) {
            return Err(Error::Config(format!("grid sizes must be integers >= 4, got {v}")));
        }
        cells.push(v as usize);
    }
    cells.sort_unstable();
    if cells.windows(2).any(|w| w[1] % w[0] != 0) {
        return Err(Error::Config("each grid size must divide the next".into()));
    }
    let models: Vec<Model> = cells
        .iter()
        .map(|&n| Config { n_cells: n, ..base.clone() }.model())
        .collect::<Result<_>>()?;
    let n0 = shared_steps(&[&models[0]], spec.horizon)?;
    let runs: Vec<Member> = models
        .par_iter()
        .zip(&cells)
        .map(|(m, &n)| run_fixed(m, spec.horizon, n0 * n / cells[0]))
        .collect();
    let mut pairs = Vec::new();
    let mut failures = Vec::new();
    for k in 0..cells.len() - 1 {
        match (&runs[k], &runs[k + 1]) {
            (Ok(a), Ok(b)) => {
                let stride = cells[k + 1] / cells[k];
                let restricted: Vec<f64> = b.u.iter().step_by(stride).cloned().collect();
                let e = field_distance(&a.u, &restricted, spec.norm, &models[k])?;
                pairs.push((1.0 / cells[k] as f64, e));
            }
            (Err(e), _) => failures.push((cells[k] as f64, e.clone())),
            (_, Err(e)) => failures.push((cells[k + 1] as f64, e.clone())),
        }
    }
    failures.dedup();
    Ok(RateReport::build(SweepKind::Refinement, "h", pairs, (1.7, 2.3), failures))
}

/// Perturbation applied to each velocity by the stability probe: ε·4x(1−x),
/// which vanishes on the axis and has max-norm ε on grids with a node at 1/2.
pub fn perturbation_profile(x: f64) -> f64 {
    4.0 * x * (1.0 - x)
}

/// Max-norm amplification ‖Δ solution(T)‖ / ‖Δ data‖ for a perturbation
/// of size `epsilon` of the initial velocities; 0 when the data do not
/// differ.
pub fn stability_probe(cfg: &Config, epsilon: f64) -> Result<f64> {
    let model = cfg.model()?;
    let grid = model.grid.clone();
    let init = &model.init;
    let bump = |f: &Vec<f64>| -> Vec<f64> {
        f.iter()
            .zip(&grid.nodes)
            .map(|(v, &x)| v + epsilon * perturbation_profile(x))
            .collect()
    };
    let perturbed = InitialData::new(&grid, init.rho0.clone(), bump(&init.u0), bump(&init.v0), bump(&init.w0), init.gamma)?;
    let data_gap = [(&init.u0, &perturbed.u0), (&init.v0, &perturbed.v0), (&init.w0, &perturbed.w0)]
        .iter()
        .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max);
    if data_gap == 0.0 {
        return Ok(0.0);
    }
    let other = Model::new(grid, perturbed, model.params, model.mode)?;
    let n_steps = shared_steps(&[&model, &other], cfg.t_end)?;
    let (a, b) = rayon::join(
        || run_fixed(&model, cfg.t_end, n_steps),
        || run_fixed(&other, cfg.t_end, n_steps),
    );
    let a = a.map_err(Error::Domain)?;
    let b = b.map_err(Error::Domain)?;
    let gap = [(&a.u, &b.u), (&a.v, &b.v), (&a.w, &b.w), (&a.r, &b.r)]
        .iter()
        .flat_map(|(p, q)| p.iter().zip(q.iter()).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max);
    Ok(gap / data_gap)
}
