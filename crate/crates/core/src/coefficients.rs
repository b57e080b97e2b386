//! Relativistic coefficient algebra: Λ₁, Λ₂, Λ₃, A₀, the Eulerian kernels
//! a₁₁, a₁₂, their Lagrangian multipliers, b₁₁, b₁₂ and the J factor.
//!
//! Pointwise functions take `inv_c2 = 1/c²` so that `inv_c2 = 0` is the
//! classical limit with every correction term an exact zero.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::thermo::{densities, theta_at, Background, InitialData, LightSpeed, PhysParams, State};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambdas {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub a0: f64,
}

/// Λ₁, Λ₂, Λ₃ and A₀ at a single node. `rho` is the mass-energy density.
pub fn lambdas_a0(u: f64, v: f64, w: f64, rho: f64, gamma: f64, c: LightSpeed) -> Result<Lambdas> {
    lambdas_at(u, v, w, rho, gamma, c.inv_c2(), 0, 0.0)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn lambdas_at(u: f64, v: f64, w: f64, rho: f64, gamma: f64, inv_c2: f64, node: usize, t: f64) -> Result<Lambdas> {
    if inv_c2 == 0.0 {
        return Ok(Lambdas {
            l1: 1.0,
            l2: 1.0,
            l3: 1.0,
            a0: 1.0,
        });
    }
    let th = theta_at(u, v, w, inv_c2, node, t)?;
    let th2 = th * th;
    let q = 1.0 - gamma * rho.powf(gamma - 1.0) * inv_c2;
    let k = q * inv_c2 / th2;
    let l1 = 1.0 + k * u * u;
    let l2 = 1.0 - k * v * v;
    let l3 = 1.0 + k * w * w;
    let cross = q * inv_c2 * inv_c2 * w * w * v * v / (th2 * th2);
    let denom = l2 * l3 + cross;
    for (what, value) in [("Lambda1", l1), ("Lambda2", l2), ("Lambda3", l3), ("A0 denominator", denom)] {
        if !(value > 0.0) {
            return Err(Error::PositivityLoss { node, t, what, value });
        }
    }
    Ok(Lambdas {
        l1,
        l2,
        l3,
        a0: 1.0 / denom,
    })
}

/// Eulerian kernels (a₁₁, a₁₂).
pub fn a_coeffs(u: f64, v: f64, w: f64, rho: f64, gamma: f64, c: LightSpeed) -> Result<(f64, f64)> {
    let l = lambdas_a0(u, v, w, rho, gamma, c)?;
    Ok(a_from_lambdas(&l, u, v, w, rho, gamma, c.inv_c2()))
}

pub(crate) fn a_from_lambdas(l: &Lambdas, u: f64, v: f64, w: f64, rho: f64, gamma: f64, inv_c2: f64) -> (f64, f64) {
    if inv_c2 == 0.0 {
        return (1.0, 1.0);
    }
    let th2 = 1.0 - (u * u + v * v + w * w) * inv_c2;
    let q = 1.0 - gamma * rho.powf(gamma - 1.0) * inv_c2;
    let k2 = q * q * l.a0 * inv_c2 * inv_c2 / (th2 * th2);
    let a11 = l.l1 - k2 * w * w * u * u + k2 * v * v * u * u;
    let a12 = 1.0 + q * l.a0 * (v * v - w * w) * inv_c2 / th2;
    (a11, a12)
}

/// Lagrangian a₁₁ multiplier: bracket^(1/(1−γ)) (1 + ρ^(γ−1)/c²) / Θ,
/// where `bracket = 1 − n^(γ−1)/c²`.
pub fn a11_multiplier(bracket: f64, rho: f64, theta: f64, gamma: f64, inv_c2: f64) -> f64 {
    if inv_c2 == 0.0 {
        return 1.0;
    }
    bracket.powf(1.0 / (1.0 - gamma)) * (1.0 + rho.powf(gamma - 1.0) * inv_c2) / theta
}

/// Lagrangian a₁₂ multiplier: γ Θ^(γ−2) bracket^(γ/(1−γ)) (1 + ρ^(γ−1)/c²).
/// Tends to γ (not 1) in the classical limit, where its term drops out.
pub fn a12_multiplier(bracket: f64, rho: f64, theta: f64, gamma: f64, inv_c2: f64) -> f64 {
    gamma * theta.powf(gamma - 2.0) * bracket.powf(gamma / (1.0 - gamma)) * (1.0 + rho.powf(gamma - 1.0) * inv_c2)
}

/// (b₁₁, b₁₂) at one node.
///
/// `b11 = γ A₀ (x Θ / (r r_x))^(γ−1) / bracket`; the b₁₁ *slot* used by
/// the υ and ω equations is `b11 * K0^(γ−1)`, which equals `A₀ p'(ρ)`.
#[allow(clippy::too_many_arguments)]
pub fn b_coeffs(a0: f64, x_over_r: f64, rx: f64, theta: f64, bracket: f64, rho: f64, gamma: f64, inv_c2: f64) -> (f64, f64) {
    let b11 = gamma * a0 * (x_over_r * theta / rx).powf(gamma - 1.0) / bracket;
    let b12 = a0 * (1.0 - gamma * rho.powf(gamma - 1.0) * inv_c2) / theta;
    (b11, b12)
}

/// J_γ = (x/(r r_x))^(γ−1) (1 − ((ρ0/r_x)(x/r)Θ)^(γ−1)/c²)^((2γ−1)/(1−γ)).
/// For γ = 2 this is (x/(r r_x)) (1 − (ρ0/r_x)(x/r)Θ/c²)^(−3).
#[allow(clippy::too_many_arguments)]
pub fn j_at(rho0: f64, x_over_r: f64, rx: f64, theta: f64, gamma: f64, inv_c2: f64, node: usize, t: f64) -> Result<f64> {
    let geo = (x_over_r / rx).powf(gamma - 1.0);
    if inv_c2 == 0.0 {
        return Ok(geo);
    }
    let bracket = 1.0 - (rho0 / rx * x_over_r * theta).powf(gamma - 1.0) * inv_c2;
    if !(bracket > 0.0) {
        return Err(Error::DensityBreakdown {
            node,
            t,
            value: bracket,
        });
    }
    Ok(geo * bracket.powf((2.0 * gamma - 1.0) / (1.0 - gamma)))
}

/// J (γ = 2) or J_γ field of a state.
pub fn j_factor(state: &State, init: &InitialData, params: &PhysParams, grid: &Grid) -> Result<Vec<f64>> {
    let bg = Background::new(init, params.c, grid)?;
    let d = densities(state, &bg, grid)?;
    (0..grid.len())
        .map(|i| j_at(init.rho0[i], d.x_over_r[i], d.rx[i], d.theta[i], init.gamma, bg.inv_c2, i, state.t))
        .collect()
}

/// All coefficient fields of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffBundle {
    pub lambda1: Vec<f64>,
    pub lambda2: Vec<f64>,
    pub lambda3: Vec<f64>,
    pub a0: Vec<f64>,
    /// Lagrangian a₁₁ (Eulerian kernel times its multiplier).
    pub a11: Vec<f64>,
    /// Lagrangian a₁₂.
    pub a12: Vec<f64>,
    /// b₁₁ slot, `A₀ p'(ρ)`.
    pub b11: Vec<f64>,
    pub b12: Vec<f64>,
    pub j_factor: Vec<f64>,
}

pub fn coefficient_bundle(state: &State, init: &InitialData, params: &PhysParams, grid: &Grid) -> Result<CoeffBundle> {
    let bg = Background::new(init, params.c, grid)?;
    let d = densities(state, &bg, grid)?;
    let gamma = init.gamma;
    let inv_c2 = bg.inv_c2;
    let m = grid.len();
    let mut out = CoeffBundle {
        lambda1: Vec::with_capacity(m),
        lambda2: Vec::with_capacity(m),
        lambda3: Vec::with_capacity(m),
        a0: Vec::with_capacity(m),
        a11: Vec::with_capacity(m),
        a12: Vec::with_capacity(m),
        b11: Vec::with_capacity(m),
        b12: Vec::with_capacity(m),
        j_factor: Vec::with_capacity(m),
    };
    for i in 0..m {
        let (u, v, w, rho) = (state.u[i], state.v[i], state.w[i], d.rho[i]);
        let l = lambdas_at(u, v, w, rho, gamma, inv_c2, i, state.t)?;
        let (a11, a12) = a_from_lambdas(&l, u, v, w, rho, gamma, inv_c2);
        let (b11, b12) = b_coeffs(l.a0, d.x_over_r[i], d.rx[i], d.theta[i], d.bracket[i], rho, gamma, inv_c2);
        out.lambda1.push(l.l1);
        out.lambda2.push(l.l2);
        out.lambda3.push(l.l3);
        out.a0.push(l.a0);
        out.a11.push(a11 * a11_multiplier(d.bracket[i], rho, d.theta[i], gamma, inv_c2));
        out.a12.push(a12 * a12_multiplier(d.bracket[i], rho, d.theta[i], gamma, inv_c2));
        out.b11.push(b11 * bg.k0[i].powf(gamma - 1.0));
        out.b12.push(b12);
        out.j_factor.push(j_at(init.rho0[i], d.x_over_r[i], d.rx[i], d.theta[i], gamma, inv_c2, i, state.t)?);
    }
    Ok(out)
}
