//! Semi-discrete right-hand sides and explicit time integration.
//!
//! The momentum equation is solved algebraically for `u_t` first; the
//! angular and axial equations then use that `u_t` (the system is
//! triangular, no implicit solve). The degenerate pressure flux is
//! evaluated in expanded form so that every term stays finite at the
//! vacuum node x = 1. On the axis, `u(0, t) = 0` is imposed.

use crate::coefficients::{a11_multiplier, a12_multiplier, a_from_lambdas, lambdas_at};
use crate::diagnostics::{baryon_residual_of, bounds_of, energy_truncated, EnergyHistory};
use crate::error::{Error, Result};
use crate::grid::{deriv, deriv2, Grid};
use crate::record::{Abort, DiagRow, EnergyColumns, RunRecord, Snapshot};
use crate::thermo::{densities, Background, Densities, InitialData, LightSpeed, PhysParams, State};

/// Which system is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Relativistic,
    Classical,
}

/// How the μ term of the regularized momentum equation is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularization {
    /// `u_t += (2μ/x)(α u_xx + (2α' − α/x) u_x − α' u/x)`: the viscous
    /// flux degenerates with the weight and is finite at x = 1.
    Weighted,
    /// The momentum equation divided through by `a₁₁ α`, giving
    /// `2μ(...)/α`, which is singular at the vacuum; the boundary node
    /// uses `2μ(2u_x − u)`.
    Divided,
}

impl std::str::FromStr for Regularization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "weighted" => Ok(Regularization::Weighted),
            "divided" => Ok(Regularization::Divided),
            other => Err(Error::Config(format!("unknown regularization `{other}`"))),
        }
    }
}

struct Momentum {
    ut: Vec<f64>,
    d: Densities,
    /// b₁₁ slot A₀ p'(ρ).
    b11: Vec<f64>,
    b12: Vec<f64>,
    ux: Vec<f64>,
    wave: f64,
    theta_sq_min: f64,
}

/// Tendencies of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct RhsEval {
    pub du_dt: Vec<f64>,
    pub dv_dt: Vec<f64>,
    pub dw_dt: Vec<f64>,
    pub dr_dt: Vec<f64>,
    pub max_wave_speed: f64,
    /// Smallest Θ² seen while evaluating.
    pub theta_sq_min: f64,
}

/// Problem definition shared by every evaluation of a run: grid, data,
/// parameters and the c-dependent background weight.
#[derive(Debug, Clone)]
pub struct Model {
    pub grid: Grid,
    pub init: InitialData,
    pub params: PhysParams,
    pub mode: Mode,
    pub regularization: Regularization,
    bg: Background,
    /// s = K0^(γ−1) and ds/dx, used away from γ = 2.
    s: Vec<f64>,
    s_x: Vec<f64>,
    alpha_x: Vec<f64>,
}

impl Model {
    pub fn new(grid: Grid, init: InitialData, params: PhysParams, mode: Mode) -> Result<Self> {
        for f in [&init.rho0, &init.u0, &init.v0, &init.w0] {
            grid.check_len(f)?;
        }
        params.check_admissible(&init)?;
        let c = match mode {
            Mode::Relativistic => params.c,
            Mode::Classical => LightSpeed::Infinite,
        };
        let bg = Background::new(&init, c, &grid)?;
        let s: Vec<f64> = bg.k0.iter().map(|k| k.powf(init.gamma - 1.0)).collect();
        let s_x = deriv(&s, &grid)?;
        let alpha_x = deriv(&bg.alpha, &grid)?;
        Ok(Self {
            grid,
            init,
            params,
            mode,
            regularization: Regularization::Weighted,
            bg,
            s,
            s_x,
            alpha_x,
        })
    }

    pub fn with_regularization(mut self, form: Regularization) -> Self {
        self.regularization = form;
        self
    }

    pub fn background(&self) -> &Background {
        &self.bg
    }

    pub fn inv_c2(&self) -> f64 {
        self.bg.inv_c2
    }

    pub fn initial_state(&self) -> State {
        State::initial(&self.grid, &self.init)
    }

    pub fn rhs(&self, state: &State) -> Result<RhsEval> {
        match self.mode {
            Mode::Relativistic => self.rhs_relativistic(state),
            Mode::Classical => self.rhs_classical(state),
        }
    }

    fn is_quadratic(&self) -> bool {
        self.init.gamma == 2.0
    }

    /// `u_t` without the μ term, plus the wave speed. Shared by both
    /// systems; with `inv_c2 = 0` every relativistic factor is exactly 1.
    fn momentum(&self, state: &State) -> Result<Momentum> {
        let grid = &self.grid;
        let d = densities(state, &self.bg, grid)?;
        let m = grid.len();
        let gamma = self.init.gamma;
        let ic2 = self.bg.inv_c2;
        let x = &grid.nodes;
        let k0 = &self.bg.k0;
        let ux = deriv(&state.u, grid)?;

        let mut a11 = vec![1.0; m];
        let mut a12 = vec![gamma; m];
        let mut b11 = vec![0.0; m];
        let mut b12 = vec![1.0; m];
        let mut wave = 0.0f64;
        let mut theta_sq_min = f64::INFINITY;
        for i in 0..m {
            let (u, v, w, rho) = (state.u[i], state.v[i], state.w[i], d.rho[i]);
            let th = d.theta[i];
            theta_sq_min = theta_sq_min.min(th * th);
            if ic2 > 0.0 {
                let l = lambdas_at(u, v, w, rho, gamma, ic2, i, state.t)?;
                let (e11, e12) = a_from_lambdas(&l, u, v, w, rho, gamma, ic2);
                a11[i] = e11 * a11_multiplier(d.bracket[i], rho, th, gamma, ic2);
                a12[i] = e12 * a12_multiplier(d.bracket[i], rho, th, gamma, ic2);
                if !(a11[i] > 0.0) {
                    return Err(Error::PositivityLoss {
                        node: i,
                        t: state.t,
                        what: "a11",
                        value: a11[i],
                    });
                }
                b11[i] = l.a0 * gamma * rho.powf(gamma - 1.0);
                b12[i] = l.a0 * (1.0 - gamma * rho.powf(gamma - 1.0) * ic2) / th;
            }
            let cs = (gamma * rho.powf(gamma - 1.0)).sqrt();
            wave = wave.max(cs * d.x_over_r[i] / d.rx[i] + u.abs());
        }

        // Pressure term divided by α, in product form
        //   (r/x) [γ/(γ−1) s' Q + s Q_x],  s = K0^(γ−1),
        // with Q_x taken from cell-midpoint values (compact differences).
        // Collocated centred differences leave a checkerboard in r
        // invisible to r_x while the x/r factor is not, which drives an
        // instability next to the axis.
        let quadratic = self.is_quadratic();
        let rho0 = &self.init.rho0;
        let q_of = |k0: f64, rho0: f64, xr: f64, th: f64, rx: f64| -> f64 {
            let base = xr * th / rx;
            if quadratic {
                let big_d = 1.0 - ic2 * rho0 * base;
                if big_d > 0.0 {
                    base * base / (big_d * big_d)
                } else {
                    f64::NAN
                }
            } else {
                let b = 1.0 - ic2 * (k0 * base).powf(gamma - 1.0);
                if b > 0.0 {
                    base.powf(gamma) * b.powf(gamma / (1.0 - gamma))
                } else {
                    f64::NAN
                }
            }
        };
        let breakdown = |i: usize| Error::DensityBreakdown {
            node: i,
            t: state.t,
            value: 1.0 - ic2 * rho0[i] * d.x_over_r[i] * d.theta[i] / d.rx[i],
        };
        let mut q = Vec::with_capacity(m);
        for i in 0..m {
            let v = q_of(k0[i], rho0[i], d.x_over_r[i], d.theta[i], d.rx[i]);
            if v.is_nan() {
                return Err(breakdown(i));
            }
            q.push(v);
        }
        let n = grid.n_cells;
        let mut qh = Vec::with_capacity(n);
        for i in 0..n {
            let rxh = (state.r[i + 1] - state.r[i]) / grid.dx;
            if !(rxh > 0.0) {
                return Err(Error::ShellCrossing {
                    node: i,
                    t: state.t,
                    rx: rxh,
                });
            }
            let xh = 0.5 * (x[i] + x[i + 1]);
            let rh = 0.5 * (state.r[i] + state.r[i + 1]);
            let v = q_of(
                0.5 * (k0[i] + k0[i + 1]),
                0.5 * (rho0[i] + rho0[i + 1]),
                xh / rh,
                0.5 * (d.theta[i] + d.theta[i + 1]),
                rxh,
            );
            if v.is_nan() {
                return Err(breakdown(i));
            }
            qh.push(v);
        }
        let ratio = gamma / (gamma - 1.0);
        let mut pres = vec![0.0; m];
        for i in 1..m {
            let q_x = if i < n {
                (qh[i] - qh[i - 1]) / grid.dx
            } else {
                (8.0 * q[n] - 9.0 * qh[n - 1] + qh[n - 2]) / (3.0 * grid.dx)
            };
            pres[i] = (ratio * self.s_x[i] * q[i] + self.s[i] * q_x) / d.x_over_r[i];
        }

        let mut ut = vec![0.0; m];
        for i in 1..m {
            let r = state.r[i];
            let v = state.v[i];
            let u = state.u[i];
            let flux_u = ux[i] + u * d.rx[i] / r;
            let weight = self.s[i] * d.x_over_r[i].powf(gamma - 1.0) / d.rx[i].powf(gamma);
            let a12_term = a12[i] * ic2 * weight * flux_u * u;
            ut[i] = v * v / r - (pres[i] + a12_term) / a11[i];
        }

        Ok(Momentum {
            ut,
            d,
            b11,
            b12,
            ux,
            wave,
            theta_sq_min,
        })
    }

    /// Tendencies of the relativistic system (γ = 2 or general γ).
    pub fn rhs_relativistic(&self, state: &State) -> Result<RhsEval> {
        let Momentum {
            mut ut,
            d,
            b11,
            b12,
            ux,
            wave,
            theta_sq_min,
        } = self.momentum(state)?;
        let m = self.grid.len();
        if self.params.mu > 0.0 {
            let reg = self.regularization_term(state)?;
            for i in 1..m {
                ut[i] += reg[i];
            }
        }
        let ic2 = self.bg.inv_c2;
        let mut dv = vec![0.0; m];
        let mut dw = vec![0.0; m];
        for i in 0..m {
            let (u, v, w) = (state.u[i], state.v[i], state.w[i]);
            // u/r and υ/r with the axis limits u_x/r_x, υ_x/r_x
            let (u_over_r, v_over_r) = if i == 0 {
                (ux[0] / d.rx[0], 0.0)
            } else {
                (u / state.r[i], v / state.r[i])
            };
            let flux_u = ux[i] + u_over_r * d.rx[i];
            let accel = ut[i] - v * v_over_r;
            dv[i] = -u_over_r * v + ic2 * b11[i] * flux_u * v - ic2 * b12[i] * accel * u * v;
            dw[i] = ic2 * b11[i] * flux_u * w - ic2 * b12[i] * accel * u * w;
        }
        Ok(RhsEval {
            du_dt: ut,
            dv_dt: dv,
            dw_dt: dw,
            dr_dt: state.u.clone(),
            max_wave_speed: wave,
            theta_sq_min,
        })
    }

    /// Tendencies of the classical system: ω_t is the literal zero.
    pub fn rhs_classical(&self, state: &State) -> Result<RhsEval> {
        let Momentum {
            mut ut, d, ux, wave, ..
        } = self.momentum(state)?;
        let m = self.grid.len();
        if self.params.mu > 0.0 {
            let reg = self.regularization_term(state)?;
            for i in 1..m {
                ut[i] += reg[i];
            }
        }
        let mut dv = vec![0.0; m];
        for i in 1..m {
            dv[i] = -(state.u[i] / state.r[i]) * state.v[i];
        }
        dv[0] = -(ux[0] / d.rx[0]) * state.v[0];
        Ok(RhsEval {
            du_dt: ut,
            dv_dt: dv,
            dw_dt: vec![0.0; m],
            dr_dt: state.u.clone(),
            max_wave_speed: wave,
            theta_sq_min: 1.0,
        })
    }

    /// μ contribution to `u_t`; zero on the axis node.
    pub fn regularization_term(&self, state: &State) -> Result<Vec<f64>> {
        let grid = &self.grid;
        let m = grid.len();
        let mu = self.params.mu;
        let mut out = vec![0.0; m];
        if mu == 0.0 {
            return Ok(out);
        }
        let u = &state.u;
        let ux = deriv(u, grid)?;
        let uxx = deriv2(u, grid)?;
        let x = &grid.nodes;
        let a = &self.bg.alpha;
        let ap = &self.alpha_x;
        let n = grid.n_cells;
        for i in 1..m {
            let op = a[i] * uxx[i] + (2.0 * ap[i] - a[i] / x[i]) * ux[i] - ap[i] * u[i] / x[i];
            out[i] = match self.regularization {
                Regularization::Weighted => 2.0 * mu * op / x[i],
                Regularization::Divided if i == n => 2.0 * mu * (2.0 * ux[n] - u[n]),
                Regularization::Divided => 2.0 * mu * op / a[i],
            };
        }
        Ok(out)
    }

    /// Largest diffusion coefficient of the μ term, for the parabolic
    /// time-step limit.
    pub fn diffusion_coefficient(&self) -> f64 {
        if self.params.mu == 0.0 {
            return 0.0;
        }
        let k = match self.regularization {
            Regularization::Weighted => self.bg.k0.iter().cloned().fold(0.0, f64::max),
            Regularization::Divided => 1.0,
        };
        2.0 * self.params.mu * k
    }
}

/// Tendencies of the relativistic system for the given data.
pub fn rhs_relativistic(state: &State, init: &InitialData, params: &PhysParams, grid: &Grid) -> Result<RhsEval> {
    Model::new(grid.clone(), init.clone(), *params, Mode::Relativistic)?.rhs_relativistic(state)
}

/// Tendencies of the classical limit system.
pub fn rhs_classical(state: &State, init: &InitialData, grid: &Grid) -> Result<RhsEval> {
    let params = PhysParams::new(LightSpeed::Infinite, init.gamma, 0.0, 0.5)?;
    Model::new(grid.clone(), init.clone(), params, Mode::Classical)?.rhs_classical(state)
}

/// μ contribution to `u_t` (weighted form).
pub fn rhs_regularization(state: &State, init: &InitialData, params: &PhysParams, grid: &Grid) -> Result<Vec<f64>> {
    if params.mu < 0.0 {
        return Err(Error::Domain(format!("mu must be non-negative, got {}", params.mu)));
    }
    let model = Model::new(grid.clone(), init.clone(), *params, Mode::Relativistic)?;
    model.regularization_term(state)
}

/// Time-step limits for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub dt_hyperbolic: f64,
    /// Infinite when μ = 0.
    pub dt_parabolic: f64,
    pub dt: f64,
}

impl StepControl {
    pub fn new(model: &Model, eval: &RhsEval) -> Self {
        let dx = model.grid.dx;
        let dt_hyperbolic = if eval.max_wave_speed > 0.0 {
            model.params.cfl * dx / eval.max_wave_speed
        } else {
            f64::INFINITY
        };
        let k = model.diffusion_coefficient();
        let dt_parabolic = if k > 0.0 { 0.4 * dx * dx / k } else { f64::INFINITY };
        Self {
            dt_hyperbolic,
            dt_parabolic,
            dt: dt_hyperbolic.min(dt_parabolic),
        }
    }

    /// Shorten the step so that it lands on `t_stop`. When the remaining
    /// interval is between one and two steps it is halved instead, so
    /// consecutive steps never differ by more than a factor of two.
    pub fn clipped(mut self, t: f64, t_stop: f64) -> Self {
        let remaining = t_stop - t;
        let slack = 1e-12 * t_stop.abs().max(1.0);
        if self.dt >= remaining - slack {
            self.dt = remaining;
        } else if 2.0 * self.dt > remaining {
            self.dt = 0.5 * remaining;
        }
        self
    }
}

fn axpy(base: &[f64], dt: f64, k: &[f64]) -> Vec<f64> {
    base.iter().zip(k).map(|(b, k)| b + dt * k).collect()
}

fn guard(state: &State) -> Result<()> {
    for (field, f) in [("r", &state.r), ("u", &state.u), ("v", &state.v), ("w", &state.w)] {
        if let Some(node) = f.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                field,
                node,
                t: state.t,
            });
        }
    }
    Ok(())
}

/// One SSP-RK3 step, written in increment form so that an exactly zero
/// tendency leaves its field bit-for-bit unchanged.
pub fn step(model: &Model, state: &State, dt: f64) -> Result<State> {
    step_with(model, state, dt, None)
}

fn step_with(model: &Model, state: &State, dt: f64, k1: Option<RhsEval>) -> Result<State> {
    let k1 = match k1 {
        Some(k) => k,
        None => model.rhs(state)?,
    };
    let stage = |a: &[f64], b: Option<&[f64]>, scale: f64, base: &[f64]| -> Vec<f64> {
        match b {
            None => axpy(base, scale, a),
            Some(b) => base.iter().zip(a.iter().zip(b)).map(|(s, (x, y))| s + scale * (x + y)).collect(),
        }
    };
    let s1 = State {
        t: state.t + dt,
        r: stage(&k1.dr_dt, None, dt, &state.r),
        u: stage(&k1.du_dt, None, dt, &state.u),
        v: stage(&k1.dv_dt, None, dt, &state.v),
        w: stage(&k1.dw_dt, None, dt, &state.w),
    };
    guard(&s1)?;
    let k2 = model.rhs(&s1)?;
    let q = 0.25 * dt;
    let s2 = State {
        t: state.t + 0.5 * dt,
        r: stage(&k1.dr_dt, Some(&k2.dr_dt), q, &state.r),
        u: stage(&k1.du_dt, Some(&k2.du_dt), q, &state.u),
        v: stage(&k1.dv_dt, Some(&k2.dv_dt), q, &state.v),
        w: stage(&k1.dw_dt, Some(&k2.dw_dt), q, &state.w),
    };
    guard(&s2)?;
    let k3 = model.rhs(&s2)?;
    let s = dt / 6.0;
    let fin = |base: &[f64], a: &[f64], b: &[f64], c: &[f64]| -> Vec<f64> {
        (0..base.len()).map(|i| base[i] + s * (a[i] + b[i] + 4.0 * c[i])).collect()
    };
    let out = State {
        t: state.t + dt,
        r: fin(&state.r, &k1.dr_dt, &k2.dr_dt, &k3.dr_dt),
        u: fin(&state.u, &k1.du_dt, &k2.du_dt, &k3.du_dt),
        v: fin(&state.v, &k1.dv_dt, &k2.dv_dt, &k3.dv_dt),
        w: fin(&state.w, &k1.dw_dt, &k2.dw_dt, &k3.dw_dt),
    };
    guard(&out)?;
    Ok(out)
}

/// Time-step policy of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stepping {
    /// StepControl recomputed every step.
    Adaptive,
    /// Exactly `n` equal steps to `t_end`.
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub t_end: f64,
    /// Spacing of recorded times; the final time is always recorded.
    pub output_every: f64,
    pub stepping: Stepping,
    /// Keep full nodal snapshots at recorded times.
    pub snapshots: bool,
    /// Evaluate the truncated energy at recorded times.
    pub energy: bool,
}

impl RunOptions {
    pub fn new(t_end: f64, output_every: f64) -> Self {
        Self {
            t_end,
            output_every,
            stepping: Stepping::Adaptive,
            snapshots: true,
            energy: true,
        }
    }

    pub fn fixed(mut self, n_steps: usize) -> Self {
        self.stepping = Stepping::Fixed(n_steps);
        self
    }

    pub fn lean(mut self) -> Self {
        self.snapshots = false;
        self.energy = false;
        self
    }
}

/// Number of equal steps of at most `dt` covering `t_end`.
pub fn steps_for(t_end: f64, dt: f64) -> usize {
    ((t_end / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
}

/// Integrate from `state` to `opts.t_end`. Solver failures stop the run
/// and are stored in the record; only set-up errors are returned as `Err`.
pub fn advance(model: &Model, state: State, opts: &RunOptions) -> Result<(State, RunRecord)> {
    if !(opts.t_end >= state.t) {
        return Err(Error::Domain(format!("t_end {} precedes t = {}", opts.t_end, state.t)));
    }
    if !(opts.output_every > 0.0) {
        return Err(Error::Domain(format!(
            "output_every must be positive, got {}",
            opts.output_every
        )));
    }
    let grid = &model.grid;
    let v0max = model.init.max_speed();
    let t0 = state.t;
    let mut record = RunRecord {
        meta: Default::default(),
        rows: Vec::new(),
        snapshots: Vec::new(),
        final_state: state.clone(),
        abort: None,
        steps: 0,
    };
    let mut history = EnergyHistory::new();
    let mut cur = state;
    let mut k = 0usize;
    let mut next_out = 1usize;

    let emit = |s: &State, dt: f64, history: &EnergyHistory, record: &mut RunRecord| -> Result<()> {
        let bounds = bounds_of(s, model, v0max)?;
        let residual = baryon_residual_of(s, model)?;
        let energy = if opts.energy {
            energy_truncated(history, model)?.map(|e| EnergyColumns {
                total: e.total(),
                e_u: e.e_u,
                e_v: e.e_v,
                e_w: e.e_w,
            })
        } else {
            None
        };
        record.rows.push(DiagRow {
            t: s.t,
            theta_sq_min: bounds.theta_sq_min,
            vel_sup_ratio: bounds.vel_sup_ratio,
            baryon_residual: residual,
            energy,
            dt,
        });
        if opts.snapshots {
            let d = densities(s, model.background(), grid)?;
            record.snapshots.push(Snapshot {
                t: s.t,
                x: grid.nodes.clone(),
                r: s.r.clone(),
                u: s.u.clone(),
                v: s.v.clone(),
                w: s.w.clone(),
                rho: d.rho,
                n: d.n,
            });
        }
        Ok(())
    };

    if opts.energy {
        history.push(&cur);
    }
    if let Err(e) = emit(&cur, 0.0, &history, &mut record) {
        record.abort = Some(Abort::from_error(&e, cur.t));
        record.final_state = cur.clone();
        return Ok((cur, record));
    }

    let span = opts.t_end - t0;
    let tol = 1e-12 * opts.t_end.abs().max(1.0);
    while opts.t_end - cur.t > tol {
        let res = (|| -> Result<(State, f64)> {
            match opts.stepping {
                Stepping::Fixed(n) => {
                    let dt = span / n as f64;
                    let mut next = step(model, &cur, dt)?;
                    next.t = if k + 1 == n { opts.t_end } else { t0 + (k + 1) as f64 * dt };
                    Ok((next, dt))
                }
                Stepping::Adaptive => {
                    let k1 = model.rhs(&cur)?;
                    let stop = (t0 + next_out as f64 * opts.output_every).min(opts.t_end);
                    let ctl = StepControl::new(model, &k1).clipped(cur.t, stop);
                    if !(ctl.dt > 0.0 && ctl.dt.is_finite()) {
                        return Err(Error::Domain(format!("step size collapsed to {}", ctl.dt)));
                    }
                    let mut next = step_with(model, &cur, ctl.dt, Some(k1))?;
                    if (stop - next.t).abs() <= tol {
                        next.t = stop;
                    }
                    Ok((next, ctl.dt))
                }
            }
        })();
        let (next, dt) = match res {
            Ok(v) => v,
            Err(e) => {
                record.abort = Some(Abort::from_error(&e, cur.t));
                break;
            }
        };
        cur = next;
        k += 1;
        if opts.energy {
            history.push(&cur);
        }
        let out_t = t0 + next_out as f64 * opts.output_every;
        let at_end = opts.t_end - cur.t <= tol;
        if cur.t >= out_t - tol || at_end {
            while t0 + next_out as f64 * opts.output_every <= cur.t + tol {
                next_out += 1;
            }
            if let Err(e) = emit(&cur, dt, &history, &mut record) {
                record.abort = Some(Abort::from_error(&e, cur.t));
                break;
            }
        }
    }
    record.steps = k;
    record.final_state = cur.clone();
    Ok((cur, record))
}
