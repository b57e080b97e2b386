//! Equation of state, Lorentz factor, the Lagrangian baryon weight and the
//! reconstruction of baryon and mass-energy densities from the flow map.

use crate::error::{Error, Result};
use crate::grid::{deriv, Grid};

/// Speed of light. `Infinite` selects the classical formulas exactly
/// (every `1/c²` factor is a literal zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LightSpeed {
    Finite(f64),
    Infinite,
}

impl LightSpeed {
    pub fn inv_c2(self) -> f64 {
        match self {
            LightSpeed::Finite(c) => 1.0 / (c * c),
            LightSpeed::Infinite => 0.0,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, LightSpeed::Finite(_))
    }

    pub fn c2(self) -> f64 {
        match self {
            LightSpeed::Finite(c) => c * c,
            LightSpeed::Infinite => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for LightSpeed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LightSpeed::Finite(c) => write!(f, "{c}"),
            LightSpeed::Infinite => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for LightSpeed {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "infinite" | "infinity" | "Inf") {
            return Ok(LightSpeed::Infinite);
        }
        let c: f64 = s
            .parse()
            .map_err(|_| Error::Config(format!("cannot parse light speed `{s}`")))?;
        if c.is_infinite() && c > 0.0 {
            return Ok(LightSpeed::Infinite);
        }
        if !(c > 0.0) {
            return Err(Error::Config(format!("light speed must be positive, got {c}")));
        }
        Ok(LightSpeed::Finite(c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub c: LightSpeed,
    pub gamma: f64,
    pub mu: f64,
    pub cfl: f64,
}

impl PhysParams {
    pub fn new(c: LightSpeed, gamma: f64, mu: f64, cfl: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::Domain(format!("gamma must exceed 1, got {gamma}")));
        }
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::Domain(format!("mu must be non-negative, got {mu}")));
        }
        if !(cfl > 0.0 && cfl < 1.0) {
            return Err(Error::Domain(format!("cfl must lie in (0,1), got {cfl}")));
        }
        if let LightSpeed::Finite(c) = c {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::Domain(format!("light speed must be positive, got {c}")));
            }
        }
        Ok(Self { c, gamma, mu, cfl })
    }

    pub fn inv_c2(&self) -> f64 {
        self.c.inv_c2()
    }

    /// Gate run before any stepping: the speed bound
    /// `12 max|v0|² < c²`, the density bound `max ρ0^(γ-1) < c²` and the
    /// sound-speed bound `p'(ρ0) < c²`.
    pub fn check_admissible(&self, init: &InitialData) -> Result<()> {
        if (init.gamma - self.gamma).abs() > 0.0 {
            return Err(Error::Inadmissible(format!(
                "initial data built for gamma = {}, parameters say {}",
                init.gamma, self.gamma
            )));
        }
        let LightSpeed::Finite(c) = self.c else {
            return Ok(());
        };
        let c2 = c * c;
        let vmax = (0..init.rho0.len())
            .map(|i| init.u0[i].powi(2) + init.v0[i].powi(2) + init.w0[i].powi(2))
            .fold(0.0, f64::max);
        if 12.0 * vmax >= c2 {
            return Err(Error::Inadmissible(format!(
                "12 max|v0|^2 = {} is not below c^2 = {c2}",
                12.0 * vmax
            )));
        }
        let hmax = init
            .rho0
            .iter()
            .map(|&r| r.powf(self.gamma - 1.0))
            .fold(0.0, f64::max);
        if hmax >= c2 {
            return Err(Error::Inadmissible(format!(
                "max rho0^(gamma-1) = {hmax} is not below c^2 = {c2}"
            )));
        }
        let smax = init
            .rho0
            .iter()
            .map(|&r| self.gamma * r.powf(self.gamma - 1.0))
            .fold(0.0, f64::max);
        if smax >= c2 {
            return Err(Error::Inadmissible(format!(
                "sound speed squared {smax} is not below c^2 = {c2}"
            )));
        }
        Ok(())
    }
}

/// p = ρ^γ.
pub fn pressure(rho: f64, gamma: f64) -> Result<f64> {
    if rho < 0.0 {
        return Err(Error::Domain(format!("negative density {rho}")));
    }
    Ok(rho.powf(gamma))
}

/// p'(ρ) = γ ρ^(γ-1).
pub fn pressure_deriv(rho: f64, gamma: f64) -> Result<f64> {
    if rho < 0.0 {
        return Err(Error::Domain(format!("negative density {rho}")));
    }
    Ok(gamma * rho.powf(gamma - 1.0))
}

/// Θ = sqrt(1 − |v|²/c²); exactly 1 for infinite c.
pub fn lorentz_theta(u: f64, v: f64, w: f64, c: LightSpeed) -> Result<f64> {
    theta_at(u, v, w, c.inv_c2(), 0, 0.0)
}

pub(crate) fn theta_at(u: f64, v: f64, w: f64, inv_c2: f64, node: usize, t: f64) -> Result<f64> {
    if inv_c2 == 0.0 {
        return Ok(1.0);
    }
    let ratio = (u * u + v * v + w * w) * inv_c2;
    if !(ratio < 1.0) {
        return Err(Error::Superluminal { node, t, ratio });
    }
    Ok((1.0 - ratio).sqrt())
}

/// K0 = ρ0 / ((1 + ρ0^(γ-1)/c²)^(1/(γ-1)) Θ0), the baryon weight per unit x.
pub fn baryon_weight(rho0: f64, theta0: f64, gamma: f64, inv_c2: f64) -> f64 {
    if inv_c2 == 0.0 {
        return rho0 / theta0;
    }
    let h = rho0.powf(gamma - 1.0);
    rho0 / ((1.0 + h * inv_c2).powf(1.0 / (gamma - 1.0)) * theta0)
}

/// α_c(x) = K0(x)·x.
pub fn alpha_c(rho0: &[f64], theta0: &[f64], nodes: &[f64], gamma: f64, c: LightSpeed) -> Result<Vec<f64>> {
    if rho0.len() != theta0.len() || rho0.len() != nodes.len() {
        return Err(Error::Shape {
            expected: nodes.len(),
            got: rho0.len().min(theta0.len()),
        });
    }
    let inv_c2 = c.inv_c2();
    if inv_c2 > 0.0 {
        let hmax = rho0.iter().map(|r| r.powf(gamma - 1.0)).fold(0.0, f64::max);
        if hmax * inv_c2 >= 1.0 {
            return Err(Error::Domain(format!(
                "max rho0^(gamma-1) = {hmax} is not below c^2"
            )));
        }
    }
    Ok(nodes
        .iter()
        .zip(rho0.iter().zip(theta0))
        .map(|(&x, (&r, &th))| baryon_weight(r, th, gamma, inv_c2) * x)
        .collect())
}

/// Baryon density n and mass-energy density ρ at one node, given the
/// baryon weight K0, x/r, Θ and r_x. Also returns the bracket
/// `1 − n^(γ-1)/c²`. `None` if the bracket is not positive.
pub fn densities_at(k0: f64, x_over_r: f64, theta: f64, rx: f64, gamma: f64, inv_c2: f64) -> Option<(f64, f64, f64)> {
    let n = k0 * x_over_r * theta / rx;
    if inv_c2 == 0.0 {
        return Some((n, n, 1.0));
    }
    let dc = 1.0 - n.powf(gamma - 1.0) * inv_c2;
    if !(dc > 0.0) {
        return None;
    }
    let rho = n * dc.powf(1.0 / (1.0 - gamma));
    Some((n, rho, dc))
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub rho0: Vec<f64>,
    pub u0: Vec<f64>,
    pub v0: Vec<f64>,
    pub w0: Vec<f64>,
    pub gamma: f64,
}

impl InitialData {
    /// Validated constructor: vacuum at x = 1, physical-vacuum slope,
    /// axis regularity.
    pub fn new(grid: &Grid, rho0: Vec<f64>, u0: Vec<f64>, v0: Vec<f64>, w0: Vec<f64>, gamma: f64) -> Result<Self> {
        let data = Self::fixture(grid, rho0, u0, v0, w0, gamma)?;
        data.validate(grid)?;
        Ok(data)
    }

    /// Shape-checked but otherwise unvalidated; used for test fixtures
    /// that deliberately ignore the vacuum requirement.
    pub fn fixture(grid: &Grid, rho0: Vec<f64>, u0: Vec<f64>, v0: Vec<f64>, w0: Vec<f64>, gamma: f64) -> Result<Self> {
        for f in [&rho0, &u0, &v0, &w0] {
            grid.check_len(f)?;
        }
        if !(gamma > 1.0) {
            return Err(Error::Domain(format!("gamma must exceed 1, got {gamma}")));
        }
        Ok(Self {
            rho0,
            u0,
            v0,
            w0,
            gamma,
        })
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        let n = grid.n_cells;
        let bad = |msg: String| Err(Error::Inadmissible(msg));
        for (name, f) in [("rho0", &self.rho0), ("u0", &self.u0), ("v0", &self.v0), ("w0", &self.w0)] {
            if let Some(i) = f.iter().position(|v| !v.is_finite()) {
                return bad(format!("{name} is not finite at node {i}"));
            }
        }
        if let Some(i) = self.rho0[..n].iter().position(|&r| !(r > 0.0)) {
            return bad(format!("rho0 must be positive on [0,1), fails at node {i}"));
        }
        if self.rho0[n] != 0.0 {
            return bad(format!("rho0(1) must vanish, got {}", self.rho0[n]));
        }
        let g1 = self.gamma - 1.0;
        let h = |i: usize| self.rho0[i].powf(g1);
        let slope = (3.0 * h(n) - 4.0 * h(n - 1) + h(n - 2)) / (2.0 * grid.dx);
        if !(slope.is_finite() && slope < 0.0) {
            return bad(format!(
                "physical vacuum slope d(rho0^(gamma-1))/dx at x=1 must be finite and negative, got {slope}"
            ));
        }
        if self.u0[0] != 0.0 || self.v0[0] != 0.0 {
            return bad("u0 and v0 must vanish on the axis".into());
        }
        Ok(())
    }

    /// Built-in demo profile: ρ0 = (1−x²)^(1/(γ−1)), u0 = υ0 = 0.1x(1−x),
    /// ω0 = 0.05(1−x²).
    pub fn demo(grid: &Grid, gamma: f64) -> Result<Self> {
        let e = 1.0 / (gamma - 1.0);
        Self::new(
            grid,
            grid.sample(|x| (1.0 - x * x).powf(e)),
            grid.sample(|x| 0.1 * x * (1.0 - x)),
            grid.sample(|x| 0.1 * x * (1.0 - x)),
            grid.sample(|x| 0.05 * (1.0 - x * x)),
            gamma,
        )
    }

    /// Parse whitespace-separated columns `x rho0 u0 v0 w0`; `#` starts a
    /// comment. The x column must coincide with the grid nodes.
    pub fn from_columns(text: &str, grid: &Grid, gamma: f64) -> Result<Self> {
        let mut cols: [Vec<f64>; 5] = Default::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let vals: Vec<f64> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
            if vals.len() != 5 {
                return Err(Error::Config(format!(
                    "line {}: expected 5 columns (x rho0 u0 v0 w0), got {}",
                    lineno + 1,
                    vals.len()
                )));
            }
            for (c, v) in cols.iter_mut().zip(vals) {
                c.push(v);
            }
        }
        grid.check_len(&cols[0])?;
        if let Some(i) = (0..grid.len()).find(|&i| (cols[0][i] - grid.nodes[i]).abs() > 1e-12) {
            return Err(Error::Config(format!(
                "x column does not match grid node {i}: {} vs {}",
                cols[0][i], grid.nodes[i]
            )));
        }
        let [_, rho0, u0, v0, w0] = cols;
        Self::new(grid, rho0, u0, v0, w0, gamma)
    }

    /// Lorentz factor of the initial velocities.
    pub fn theta0(&self, c: LightSpeed) -> Result<Vec<f64>> {
        let inv_c2 = c.inv_c2();
        (0..self.rho0.len())
            .map(|i| theta_at(self.u0[i], self.v0[i], self.w0[i], inv_c2, i, 0.0))
            .collect()
    }

    pub fn max_speed(&self) -> f64 {
        (0..self.rho0.len())
            .map(|i| (self.u0[i].powi(2) + self.v0[i].powi(2) + self.w0[i].powi(2)).sqrt())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub t: f64,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

impl State {
    /// r = x and the initial velocities.
    pub fn initial(grid: &Grid, init: &InitialData) -> Self {
        Self {
            t: 0.0,
            r: grid.nodes.clone(),
            u: init.u0.clone(),
            v: init.v0.clone(),
            w: init.w0.clone(),
        }
    }

    pub fn fields(&self) -> [&Vec<f64>; 4] {
        [&self.r, &self.u, &self.v, &self.w]
    }
}

/// Per-node quantities that depend only on the initial data and c.
#[derive(Debug, Clone, PartialEq)]
pub struct Background {
    pub gamma: f64,
    pub inv_c2: f64,
    pub theta0: Vec<f64>,
    /// K0 = α_c / x.
    pub k0: Vec<f64>,
    pub alpha: Vec<f64>,
}

impl Background {
    pub fn new(init: &InitialData, c: LightSpeed, grid: &Grid) -> Result<Self> {
        grid.check_len(&init.rho0)?;
        let theta0 = init.theta0(c)?;
        let alpha = alpha_c(&init.rho0, &theta0, &grid.nodes, init.gamma, c)?;
        let inv_c2 = c.inv_c2();
        let k0 = init
            .rho0
            .iter()
            .zip(&theta0)
            .map(|(&r, &th)| baryon_weight(r, th, init.gamma, inv_c2))
            .collect();
        Ok(Self {
            gamma: init.gamma,
            inv_c2,
            theta0,
            k0,
            alpha,
        })
    }
}

/// Reconstructed fields of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct Densities {
    pub n: Vec<f64>,
    pub rho: Vec<f64>,
    pub theta: Vec<f64>,
    pub rx: Vec<f64>,
    pub x_over_r: Vec<f64>,
    /// 1 − n^(γ−1)/c².
    pub bracket: Vec<f64>,
}

/// x/r with the axis value 1/r_x(0).
pub(crate) fn x_over_r(state: &State, rx: &[f64], grid: &Grid) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(grid.len());
    out.push(1.0 / rx[0]);
    for i in 1..grid.len() {
        let r = state.r[i];
        if !(r > 0.0) {
            return Err(Error::ShellCrossing {
                node: i,
                t: state.t,
                rx: rx[i],
            });
        }
        out.push(grid.nodes[i] / r);
    }
    Ok(out)
}

pub(crate) fn checked_rx(state: &State, grid: &Grid) -> Result<Vec<f64>> {
    let rx = deriv(&state.r, grid)?;
    if let Some(i) = rx.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::ShellCrossing {
            node: i,
            t: state.t,
            rx: rx[i],
        });
    }
    Ok(rx)
}

pub(crate) fn densities(state: &State, bg: &Background, grid: &Grid) -> Result<Densities> {
    for f in state.fields() {
        grid.check_len(f)?;
    }
    if state.r[0] < 0.0 {
        return Err(Error::ShellCrossing {
            node: 0,
            t: state.t,
            rx: f64::NAN,
        });
    }
    let rx = checked_rx(state, grid)?;
    let xr = x_over_r(state, &rx, grid)?;
    let m = grid.len();
    let (mut n, mut rho, mut theta, mut bracket) =
        (Vec::with_capacity(m), Vec::with_capacity(m), Vec::with_capacity(m), Vec::with_capacity(m));
    for i in 0..m {
        let th = theta_at(state.u[i], state.v[i], state.w[i], bg.inv_c2, i, state.t)?;
        let (ni, ri, di) = densities_at(bg.k0[i], xr[i], th, rx[i], bg.gamma, bg.inv_c2).ok_or(
            Error::DensityBreakdown {
                node: i,
                t: state.t,
                value: 1.0 - (bg.k0[i] * xr[i] * th / rx[i]).powf(bg.gamma - 1.0) * bg.inv_c2,
            },
        )?;
        n.push(ni);
        rho.push(ri);
        theta.push(th);
        bracket.push(di);
    }
    Ok(Densities {
        n,
        rho,
        theta,
        rx,
        x_over_r: xr,
        bracket,
    })
}

/// Baryon density n and mass-energy density ρ of a state.
pub fn density_reconstruct(state: &State, init: &InitialData, params: &PhysParams, grid: &Grid) -> Result<Densities> {
    let bg = Background::new(init, params.c, grid)?;
    densities(state, &bg, grid)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    #[test]
    fn pressure_values() {
        assert_eq!(pressure(0.0, 2.0).unwrap(), 0.0);
        assert_eq!(pressure_deriv(0.0, 2.0).unwrap(), 0.0);
        for g in [1.4, 2.0, 3.0] {
            assert_eq!(pressure(1.0, g).unwrap(), 1.0);
            assert_eq!(pressure_deriv(1.0, g).unwrap(), g);
        }
        assert_eq!(pressure(0.5, 2.0).unwrap(), 0.25);
        assert_eq!(pressure_deriv(0.5, 2.0).unwrap(), 1.0);
        assert!(pressure(-0.1, 2.0).is_err());
        assert!(pressure_deriv(-0.1, 2.0).is_err());
    }

    #[test]
    fn theta_values() {
        let c = LightSpeed::Finite(10.0);
        assert_eq!(lorentz_theta(0.0, 0.0, 0.0, c).unwrap(), 1.0);
        let th = lorentz_theta(3.0, 0.0, 4.0, c).unwrap();
        assert!((th - 0.8660254037844386).abs() < 1e-15);
        assert!(matches!(
            lorentz_theta(6.0, 8.0, 0.0, c),
            Err(Error::Superluminal { .. })
        ));
        assert_eq!(lorentz_theta(1e3, 0.0, 0.0, LightSpeed::Infinite).unwrap(), 1.0);
    }

    #[test]
    fn alpha_examples() {
        let g = Grid::new(10, 0.1).unwrap();
        let rho0 = g.sample(|x| 1.0 - x);
        let a = alpha_c(&rho0, &[1.0; 11], &g.nodes, 2.0, LightSpeed::Infinite).unwrap();
        for (x, v) in g.nodes.iter().zip(&a) {
            assert!((v - x * (1.0 - x)).abs() < 1e-15);
        }
        let a = alpha_c(&[0.5], &[1.0], &[0.5], 2.0, LightSpeed::Finite(10.0)).unwrap();
        assert!((a[0] - 0.24875621890547264).abs() < 1e-15);
        assert!(alpha_c(&[2.0], &[1.0], &[0.5], 2.0, LightSpeed::Finite(1.0)).is_err());
    }

    #[test]
    fn density_point_examples() {
        // classical
        let (_, rho, _) = densities_at(0.4, 0.5 / 0.55, 1.0, 1.1, 2.0, 0.0).unwrap();
        assert!((rho - 0.33057851239669421).abs() < 1e-15);
        // relativistic, c = 10
        let k0 = baryon_weight(0.5, 1.0, 2.0, 0.01);
        let (n, rho, _) = densities_at(k0, 0.5 / 0.6, 1.0, 1.2, 2.0, 0.01).unwrap();
        assert!((n / 0.34549474847982311 - 1.0).abs() < 1e-12);
        assert!((rho / 0.34669255304396062 - 1.0).abs() < 1e-12);
        assert!(densities_at(200.0, 1.0, 1.0, 1.0, 2.0, 0.01).is_none());
    }

    #[test]
    fn demo_is_admissible() {
        let g = Grid::new(32, 0.1).unwrap();
        for gamma in [1.5, 2.0, 3.0] {
            let d = InitialData::demo(&g, gamma).unwrap();
            let p = PhysParams::new(LightSpeed::Finite(1.0), gamma, 0.0, 0.5).unwrap();
            // sound speed at the centre is sqrt(gamma) >= 1, so c = 1 is out
            assert!(p.check_admissible(&d).is_err());
            let p = PhysParams::new(LightSpeed::Finite(8.0), gamma, 0.0, 0.5).unwrap();
            p.check_admissible(&d).unwrap();
        }
    }

    #[test]
    fn validation_failures() {
        let g = Grid::new(16, 0.1).unwrap();
        let z = vec![0.0; 17];
        let flat = vec![1.0; 17];
        assert!(InitialData::new(&g, flat.clone(), z.clone(), z.clone(), z.clone(), 2.0).is_err());
        let mut u = z.clone();
        u[0] = 0.1;
        let rho = g.sample(|x| 1.0 - x * x);
        assert!(InitialData::new(&g, rho.clone(), u, z.clone(), z.clone(), 2.0).is_err());
        // (1-x)^2: slope of rho0 at the vacuum vanishes, not a physical vacuum
        let rho2 = g.sample(|x| (1.0 - x).powi(2));
        assert!(InitialData::new(&g, rho2, z.clone(), z.clone(), z.clone(), 2.0).is_err());
        assert!(InitialData::new(&g, rho, z.clone(), z.clone(), z, 2.0).is_ok());
        assert!(InitialData::fixture(&g, flat, vec![0.0; 3], vec![0.0; 17], vec![0.0; 17], 2.0).is_err());
    }

    #[test]
    fn column_ingestion() {
        let g = Grid::new(4, 0.1).unwrap();
        let mut text = String::from("# x rho0 u0 v0 w0\n");
        for &x in &g.nodes {
            text.push_str(&format!("{x} {} 0 0 0\n", 1.0 - x * x));
        }
        let d = InitialData::from_columns(&text, &g, 2.0).unwrap();
        assert_eq!(d.rho0[1], 1.0 - 0.0625);
        assert!(InitialData::from_columns("0 1 0 0\n", &g, 2.0).is_err());
    }

    #[test]
    fn initial_density_identity() {
        let g = Grid::new(64, 0.1).unwrap();
        for gamma in [1.5, 2.0, 3.0] {
            let d = InitialData::demo(&g, gamma).unwrap();
            for c in [LightSpeed::Finite(10.0), LightSpeed::Infinite] {
                let p = PhysParams::new(c, gamma, 0.0, 0.5).unwrap();
                let s = State::initial(&g, &d);
                let dens = density_reconstruct(&s, &d, &p, &g).unwrap();
                for (a, b) in dens.rho.iter().zip(&d.rho0) {
                    assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "{a} {b}");
                }
            }
        }
    }
}
