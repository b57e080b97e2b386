//! Weighted norms, the truncated energy functional, short-time bound
//! monitors, the first compatibility condition and the baryon residual.
//!
//! Energy term names (stable vocabulary, prefixed `u.`, `v.` or `w.`):
//!
//! | name | quantity |
//! |------|----------|
//! | `u.h2` | ‖u‖₂² |
//! | `u.over_x_h1` | ‖u/x‖₁² |
//! | `u.a0sx_tt_h2` | Σₖ≤₂ ‖(α₀/√x) ∂ₓᵏ∂ₜ²u‖² |
//! | `u.tt_h1` | ‖∂ₜ²u‖₁² |
//! | `u.tt_x_over_sqrt_x` | ‖∂ₜ²uₓ/√x‖² |
//! | `u.tt_over_x_sqrt_x` | ‖∂ₜ²u/(x√x)‖² |
//! | `u.t_h1` | ‖∂ₜu‖₁² (stands in for the H^{3/2} norm) |
//! | `u.t_over_x_h1` | ‖∂ₜu/x‖₁² |
//! | `u.sqrt_a0_t_xx` | ‖√α₀ ∂ₜuₓₓ‖² |
//! | `u.xi_t_h1` | ‖ξ∂ₜu‖₁² |
//! | `v.t_sup`, `v.tt_sup` | ‖∂ₜυ‖∞², ‖∂ₜ²υ‖∞² |
//! | `v.t_over_x_sup`, `v.tt_over_x_sup` | ‖∂ₜυ/x‖∞², ‖∂ₜ²υ/x‖∞² |
//! | `v.a0x_tx_sup` | ‖(α₀/x)∂ₜυₓ‖∞² |
//! | `v.x_l2`, `v.tx_l2`, `v.sqrt_a0_ttx_l2` | ‖υₓ‖², ‖∂ₜυₓ‖², ‖√α₀∂ₜ²υₓ‖² |
//! | `v.a0sx_tt_xx` | ‖(α₀/√x)∂ₜ²υₓₓ‖² |
//!
//! and the same `w.*` terms for ω. Weighted H^k norms weight each
//! derivative (Σ‖w ∂ᵏf‖²) except for the cut-off ξ, which multiplies the
//! field before differentiating. Integrands that are not integrable at the
//! axis get a zero contribution from node 0. Sup-norm terms are stored
//! squared like every other term.

use std::collections::{BTreeMap, VecDeque};

use crate::coefficients::{a11_multiplier, a12_multiplier, a_from_lambdas, lambdas_at};
use crate::dynamics::{Mode, Model};
use crate::error::{Error, Result};
use crate::grid::{deriv, deriv2, integrate, Grid};
use crate::thermo::{densities, Background, InitialData, PhysParams, State};

/// Θ² threshold of the short-time bounds.
pub const THETA_SQ_FLOOR: f64 = 11.0 / 12.0;
/// Allowed growth of the velocity sup-norm.
pub const VELOCITY_GROWTH: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseWeight {
    One,
    Dist,
    DistSq,
    Alpha0OverSqrtX,
    Alpha0,
    SqrtAlpha0,
    Alpha0OverX,
    Alpha0Pow3Half,
    SqrtAlpha0CubedOverX,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mask {
    None,
    Xi,
    Chi,
}

/// A named weight: base weight optionally multiplied by ξ or χ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weight {
    pub base: BaseWeight,
    pub mask: Mask,
}

const NAMES: [(&str, BaseWeight); 9] = [
    ("1", BaseWeight::One),
    ("d", BaseWeight::Dist),
    ("d2", BaseWeight::DistSq),
    ("alpha0/sqrt_x", BaseWeight::Alpha0OverSqrtX),
    ("alpha0", BaseWeight::Alpha0),
    ("sqrt_alpha0", BaseWeight::SqrtAlpha0),
    ("alpha0/x", BaseWeight::Alpha0OverX),
    ("alpha0^1.5", BaseWeight::Alpha0Pow3Half),
    ("sqrt(alpha0^3/x)", BaseWeight::SqrtAlpha0CubedOverX),
];

impl std::str::FromStr for Weight {
    type Err = Error;
    /// Names: `1`, `d`, `d2`, `alpha0/sqrt_x`, `alpha0`, `sqrt_alpha0`,
    /// `alpha0/x`, `alpha0^1.5`, `sqrt(alpha0^3/x)`, optionally prefixed
    /// by `xi*` or `chi*`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (mask, rest) = if let Some(r) = s.strip_prefix("xi*") {
            (Mask::Xi, r)
        } else if let Some(r) = s.strip_prefix("chi*") {
            (Mask::Chi, r)
        } else {
            (Mask::None, s)
        };
        NAMES
            .iter()
            .find(|(n, _)| *n == rest)
            .map(|&(_, base)| Weight { base, mask })
            .ok_or_else(|| Error::Config(format!("unknown weight `{s}`")))
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let prefix = match self.mask {
            Mask::None => "",
            Mask::Xi => "xi*",
            Mask::Chi => "chi*",
        };
        let name = NAMES.iter().find(|(_, b)| *b == self.base).map(|(n, _)| *n).unwrap_or("?");
        write!(f, "{prefix}{name}")
    }
}

impl Weight {
    pub const fn plain(base: BaseWeight) -> Self {
        Self { base, mask: Mask::None }
    }

    /// Nodal weight values; α₀ = ρ₀x, with axis limits α₀/√x → 0 and
    /// α₀/x → ρ₀(0).
    pub fn values(&self, rho0: &[f64], grid: &Grid) -> Result<Vec<f64>> {
        grid.check_len(rho0)?;
        let mut w: Vec<f64> = grid
            .nodes
            .iter()
            .zip(rho0)
            .map(|(&x, &r)| {
                let a = r * x;
                match self.base {
                    BaseWeight::One => 1.0,
                    BaseWeight::Dist => x.min(1.0 - x),
                    BaseWeight::DistSq => x.min(1.0 - x).powi(2),
                    BaseWeight::Alpha0OverSqrtX => r * x.sqrt(),
                    BaseWeight::Alpha0 => a,
                    BaseWeight::SqrtAlpha0 => a.sqrt(),
                    BaseWeight::Alpha0OverX => r,
                    BaseWeight::Alpha0Pow3Half => a.powf(1.5),
                    BaseWeight::SqrtAlpha0CubedOverX => r.powf(1.5) * x,
                }
            })
            .collect();
        let mask = match self.mask {
            Mask::None => None,
            Mask::Xi => Some(grid.cutoff_interior()),
            Mask::Chi => Some(grid.cutoff_boundary()),
        };
        if let Some(m) = mask {
            w.iter_mut().zip(m).for_each(|(a, b)| *a *= b);
        }
        Ok(w)
    }
}

/// sqrt(∫ w² f² dx) by the trapezoid rule.
pub fn weighted_norm(f: &[f64], weight: &Weight, rho0: &[f64], grid: &Grid) -> Result<f64> {
    grid.check_len(f)?;
    let w = weight.values(rho0, grid)?;
    Ok(l2_sq(&w.iter().zip(f).map(|(a, b)| a * b).collect::<Vec<_>>(), grid)?.sqrt())
}

fn l2_sq(f: &[f64], grid: &Grid) -> Result<f64> {
    integrate(&f.iter().map(|v| v * v).collect::<Vec<_>>(), grid)
}

fn sup_sq(f: &[f64]) -> f64 {
    f.iter().map(|v| v * v).fold(0.0, f64::max)
}

/// f/x with the axis value f_x(0).
fn over_x(f: &[f64], grid: &Grid) -> Result<Vec<f64>> {
    let fx = deriv(f, grid)?;
    Ok((0..grid.len())
        .map(|i| if i == 0 { fx[0] } else { f[i] / grid.nodes[i] })
        .collect())
}

/// ∫ f² x^(-p) dx with the node-0 contribution dropped.
fn singular_l2_sq(f: &[f64], p: i32, grid: &Grid) -> Result<f64> {
    let g: Vec<f64> = (0..grid.len())
        .map(|i| if i == 0 { 0.0 } else { f[i] * f[i] * grid.nodes[i].powi(-p) })
        .collect();
    integrate(&g, grid)
}

fn h_sq(f: &[f64], order: usize, grid: &Grid) -> Result<f64> {
    let mut total = l2_sq(f, grid)?;
    if order >= 1 {
        total += l2_sq(&deriv(f, grid)?, grid)?;
    }
    if order >= 2 {
        total += l2_sq(&deriv2(f, grid)?, grid)?;
    }
    Ok(total)
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

/// Finite-difference weights for derivatives of order 0..=m at `z` over
/// arbitrary abscissae.
pub fn fornberg_weights(z: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Depth of the time-derivative stencil.
pub const HISTORY_DEPTH: usize = 5;

/// The most recent states of a run, oldest first.
#[derive(Debug, Clone, Default)]
pub struct EnergyHistory {
    states: VecDeque<State>,
}

impl EnergyHistory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, s: &State) {
        if self.states.len() == HISTORY_DEPTH {
            self.states.pop_front();
        }
        self.states.push_back(s.clone());
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn is_ready(&self) -> bool {
        self.states.len() == HISTORY_DEPTH
    }

    pub fn latest(&self) -> Option<&State> {
        self.states.back()
    }

    pub fn from_states(states: &[State]) -> Self {
        let mut h = Self::new();
        for s in states {
            h.push(s);
        }
        h
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergySnapshot {
    pub t: f64,
    pub e_u: f64,
    pub e_v: f64,
    pub e_w: f64,
    pub terms: BTreeMap<String, f64>,
}

impl EnergySnapshot {
    pub fn total(&self) -> f64 {
        self.e_u + self.e_v + self.e_w
    }
}

/// Truncated energy at the latest stored time; `None` until the history
/// holds enough states. Time derivatives use one-sided finite-difference
/// weights over the stored (possibly non-uniform) times.
pub fn energy_truncated(history: &EnergyHistory, model: &Model) -> Result<Option<EnergySnapshot>> {
    if !history.is_ready() {
        return Ok(None);
    }
    let grid = &model.grid;
    let states: Vec<&State> = history.states.iter().collect();
    let ts: Vec<f64> = states.iter().map(|s| s.t).collect();
    let t = *ts.last().unwrap();
    let wts = fornberg_weights(t, &ts, 2);
    let dt_field = |pick: fn(&State) -> &Vec<f64>, order: usize| -> Vec<f64> {
        let mut out = vec![0.0; grid.len()];
        for (s, &c) in states.iter().zip(&wts[order]) {
            for (o, v) in out.iter_mut().zip(pick(s)) {
                *o += c * v;
            }
        }
        out
    };
    let rho0 = &model.init.rho0;
    let w_a0sx = Weight::plain(BaseWeight::Alpha0OverSqrtX).values(rho0, grid)?;
    let w_sqa0 = Weight::plain(BaseWeight::SqrtAlpha0).values(rho0, grid)?;
    let w_a0x = Weight::plain(BaseWeight::Alpha0OverX).values(rho0, grid)?;
    let xi = grid.cutoff_interior();

    let mut terms = BTreeMap::new();
    let cur = states[HISTORY_DEPTH - 1];

    // E(u)
    let u = &cur.u;
    let ut = dt_field(|s| &s.u, 1);
    let utt = dt_field(|s| &s.u, 2);
    let utt_x = deriv(&utt, grid)?;
    let utt_xx = deriv2(&utt, grid)?;
    let mut eu = Vec::new();
    eu.push(("u.h2", h_sq(u, 2, grid)?));
    eu.push(("u.over_x_h1", h_sq(&over_x(u, grid)?, 1, grid)?));
    eu.push((
        "u.a0sx_tt_h2",
        l2_sq(&mul(&w_a0sx, &utt), grid)? + l2_sq(&mul(&w_a0sx, &utt_x), grid)? + l2_sq(&mul(&w_a0sx, &utt_xx), grid)?,
    ));
    eu.push(("u.tt_h1", h_sq(&utt, 1, grid)?));
    eu.push(("u.tt_x_over_sqrt_x", singular_l2_sq(&utt_x, 1, grid)?));
    eu.push(("u.tt_over_x_sqrt_x", singular_l2_sq(&utt, 3, grid)?));
    eu.push(("u.t_h1", h_sq(&ut, 1, grid)?));
    eu.push(("u.t_over_x_h1", h_sq(&over_x(&ut, grid)?, 1, grid)?));
    eu.push(("u.sqrt_a0_t_xx", l2_sq(&mul(&w_sqa0, &deriv2(&ut, grid)?), grid)?));
    eu.push(("u.xi_t_h1", h_sq(&mul(&xi, &ut), 1, grid)?));

    let angular = |prefix: &str, f: &Vec<f64>, ft: Vec<f64>, ftt: Vec<f64>| -> Result<Vec<(String, f64)>> {
        let ft_x = deriv(&ft, grid)?;
        let ftt_x = deriv(&ftt, grid)?;
        let ftt_xx = deriv2(&ftt, grid)?;
        Ok(vec![
            (format!("{prefix}.t_sup"), sup_sq(&ft)),
            (format!("{prefix}.tt_sup"), sup_sq(&ftt)),
            (format!("{prefix}.t_over_x_sup"), sup_sq(&over_x(&ft, grid)?)),
            (format!("{prefix}.tt_over_x_sup"), sup_sq(&over_x(&ftt, grid)?)),
            (format!("{prefix}.a0x_tx_sup"), sup_sq(&mul(&w_a0x, &ft_x))),
            (format!("{prefix}.x_l2"), l2_sq(&deriv(f, grid)?, grid)?),
            (format!("{prefix}.tx_l2"), l2_sq(&ft_x, grid)?),
            (format!("{prefix}.sqrt_a0_ttx_l2"), l2_sq(&mul(&w_sqa0, &ftt_x), grid)?),
            (format!("{prefix}.a0sx_tt_xx"), l2_sq(&mul(&w_a0sx, &ftt_xx), grid)?),
        ])
    };
    let ev = angular("v", &cur.v, dt_field(|s| &s.v, 1), dt_field(|s| &s.v, 2))?;
    let ew = angular("w", &cur.w, dt_field(|s| &s.w, 1), dt_field(|s| &s.w, 2))?;

    let mut sum = |items: Vec<(String, f64)>| -> f64 {
        let mut acc = 0.0;
        for (k, v) in items {
            acc += v;
            terms.insert(k, v);
        }
        acc
    };
    let e_u = sum(eu.into_iter().map(|(k, v)| (k.to_string(), v)).collect());
    let e_v = sum(ev);
    let e_w = sum(ew);
    Ok(Some(EnergySnapshot { t, e_u, e_v, e_w, terms }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub theta_sq_min: f64,
    /// max |(u,υ,ω)| over nodes divided by the initial max; 0 when the
    /// initial max vanishes.
    pub vel_sup_ratio: f64,
    pub rx_range: (f64, f64),
    pub x_over_r_range: (f64, f64),
    pub lorentz_ok: bool,
    pub velocity_ok: bool,
    /// 2/3 ≤ x/r ≤ 2 and 1/2 ≤ r_x ≤ 3/2.
    pub geometry_ok: bool,
}

fn bounds_raw(state: &State, grid: &Grid, inv_c2: f64, v0max: f64) -> Result<BoundsReport> {
    for f in state.fields() {
        grid.check_len(f)?;
    }
    let rx = deriv(&state.r, grid)?;
    let mut theta_sq_min = f64::INFINITY;
    let mut vmax = 0.0f64;
    let mut rx_range = (f64::INFINITY, f64::NEG_INFINITY);
    let mut xr_range = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..grid.len() {
        let sp2 = state.u[i].powi(2) + state.v[i].powi(2) + state.w[i].powi(2);
        theta_sq_min = theta_sq_min.min(1.0 - sp2 * inv_c2);
        vmax = vmax.max(sp2.sqrt());
        rx_range = (rx_range.0.min(rx[i]), rx_range.1.max(rx[i]));
        let xr = if i == 0 { 1.0 / rx[0] } else { grid.nodes[i] / state.r[i] };
        xr_range = (xr_range.0.min(xr), xr_range.1.max(xr));
    }
    let vel_sup_ratio = if v0max > 0.0 { vmax / v0max } else { 0.0 };
    Ok(BoundsReport {
        theta_sq_min,
        vel_sup_ratio,
        rx_range,
        x_over_r_range: xr_range,
        lorentz_ok: theta_sq_min >= THETA_SQ_FLOOR,
        velocity_ok: vel_sup_ratio <= VELOCITY_GROWTH,
        geometry_ok: xr_range.0 >= 2.0 / 3.0 && xr_range.1 <= 2.0 && rx_range.0 >= 0.5 && rx_range.1 <= 1.5,
    })
}

/// Extrema and threshold flags of a state.
pub fn bounds_report(state: &State, init: &InitialData, params: &PhysParams, grid: &Grid) -> Result<BoundsReport> {
    bounds_raw(state, grid, params.inv_c2(), init.max_speed())
}

pub(crate) fn bounds_of(state: &State, model: &Model, v0max: f64) -> Result<BoundsReport> {
    bounds_raw(state, &model.grid, model.inv_c2(), v0max)
}

/// max |(n/Θ) r_x r − α_c| / max α_c.
pub fn baryon_residual_fields(n: &[f64], theta: &[f64], rx: &[f64], r: &[f64], alpha: &[f64]) -> f64 {
    let scale = alpha.iter().cloned().fold(0.0, f64::max);
    let err = (0..alpha.len())
        .map(|i| (n[i] / theta[i] * rx[i] * r[i] - alpha[i]).abs())
        .fold(0.0, f64::max);
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

pub fn baryon_residual(state: &State, init: &InitialData, params: &PhysParams, grid: &Grid) -> Result<f64> {
    let bg = Background::new(init, params.c, grid)?;
    let d = densities(state, &bg, grid)?;
    Ok(baryon_residual_fields(&d.n, &d.theta, &d.rx, &state.r, &bg.alpha))
}

pub(crate) fn baryon_residual_of(state: &State, model: &Model) -> Result<f64> {
    let d = densities(state, model.background(), &model.grid)?;
    Ok(baryon_residual_fields(&d.n, &d.theta, &d.rx, &state.r, &model.background().alpha))
}

/// ∂ₜu(x, 0) from the momentum equation at t = 0 (r = x, r_x = 1,
/// Θ = Θ₀), μ = 0. The axis value is 0.
pub fn compat_first_derivative(init: &InitialData, params: &PhysParams, grid: &Grid) -> Result<Vec<f64>> {
    if init.gamma != 2.0 {
        let p = PhysParams { mu: 0.0, ..*params };
        let model = Model::new(grid.clone(), init.clone(), p, Mode::Relativistic)?;
        return Ok(model.rhs(&model.initial_state())?.du_dt);
    }
    let bg = Background::new(init, params.c, grid)?;
    let ic2 = bg.inv_c2;
    let m = grid.len();
    let x = &grid.nodes;
    let k0 = &bg.k0;
    let k0_x = deriv(k0, grid)?;
    let u0x = deriv(&init.u0, grid)?;
    let gamma = init.gamma;
    let mut h0 = Vec::with_capacity(m);
    for i in 0..m {
        let d0 = 1.0 - ic2 * init.rho0[i] * bg.theta0[i];
        if !(d0 > 0.0) {
            return Err(Error::DensityBreakdown { node: i, t: 0.0, value: d0 });
        }
        h0.push(bg.theta0[i].powi(2) / (d0 * d0));
    }
    let h0_x = deriv(&h0, grid)?;
    let mut out = vec![0.0; m];
    for i in 1..m {
        let (u, v, w, rho) = (init.u0[i], init.v0[i], init.w0[i], init.rho0[i]);
        let th = bg.theta0[i];
        let bracket = 1.0 - (k0[i] * th).powf(gamma - 1.0) * ic2;
        let l = lambdas_at(u, v, w, rho, gamma, ic2, i, 0.0)?;
        let (e11, e12) = a_from_lambdas(&l, u, v, w, rho, gamma, ic2);
        let a11 = e11 * a11_multiplier(bracket, rho, th, gamma, ic2);
        let a12 = e12 * a12_multiplier(bracket, rho, th, gamma, ic2);
        // (1/α)(α²/x · H0)_x, expanded
        let flux = (k0[i] / x[i] + 2.0 * k0_x[i]) * h0[i] + k0[i] * h0_x[i];
        let geo = k0[i] / x[i] * h0[i];
        let corr = a12 * ic2 * k0[i] * (u0x[i] + u / x[i]) * u;
        out[i] = v * v / x[i] - (flux - geo + corr) / a11;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fornberg_matches_textbook() {
        let w = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w[1], vec![-0.5, 0.0, 0.5]);
        assert_eq!(w[2], vec![1.0, -2.0, 1.0]);
        // one-sided, non-uniform: exact on quadratics
        let ts = [0.0, 0.1, 0.25, 0.3, 0.42];
        let w = fornberg_weights(0.42, &ts, 2);
        let f = |t: f64| 3.0 * t * t - t + 2.0;
        let d1: f64 = ts.iter().zip(&w[1]).map(|(t, c)| c * f(*t)).sum();
        let d2: f64 = ts.iter().zip(&w[2]).map(|(t, c)| c * f(*t)).sum();
        assert!((d1 - (6.0 * 0.42 - 1.0)).abs() < 1e-9);
        assert!((d2 - 6.0).abs() < 1e-8);
    }

    #[test]
    fn weight_names_round_trip() {
        for (name, _) in NAMES {
            for prefix in ["", "xi*", "chi*"] {
                let s = format!("{prefix}{name}");
                let w: Weight = s.parse().unwrap();
                assert_eq!(w.to_string(), s);
            }
        }
        assert!(matches!("alpha1".parse::<Weight>(), Err(Error::Config(_))));
    }

    #[test]
    fn weighted_norm_examples() {
        let g = Grid::new(2000, 0.1).unwrap();
        let rho0 = g.sample(|x| 1.0 - x);
        let ones = vec![1.0; g.len()];
        let w: Weight = "alpha0/sqrt_x".parse().unwrap();
        let v = weighted_norm(&ones, &w, &rho0, &g).unwrap();
        assert!((v * v - 1.0 / 12.0).abs() < 1e-6);
        let v = weighted_norm(&ones, &"d".parse().unwrap(), &rho0, &g).unwrap();
        assert!((v * v - 1.0 / 12.0).abs() < 1e-6);
        let z = vec![0.0; g.len()];
        assert_eq!(weighted_norm(&z, &w, &rho0, &g).unwrap(), 0.0);
    }
}
