//! Shared fixtures for the integration suites.
#![allow(dead_code, clippy::excessive_precision)]

use relvac::coefficients::{a_coeffs, b_coeffs, j_at, lambdas_a0};
use relvac::thermo::{alpha_c, densities_at, lorentz_theta, pressure, pressure_deriv};
use relvac::LightSpeed;

/// A pointwise value and its arbitrary-precision reference
/// (tests/oracle/coefficients.py).
pub struct Case {
    pub name: &'static str,
    pub got: f64,
    pub want: f64,
}

impl Case {
    pub fn rel_err(&self) -> f64 {
        ((self.got - self.want) / self.want).abs()
    }
}

pub const C10: LightSpeed = LightSpeed::Finite(10.0);

pub fn coefficient_cases() -> Vec<Case> {
    let mut out = Vec::new();
    let mut push = |name, got, want| out.push(Case { name, got, want });

    push("pressure", pressure(0.5, 2.0).unwrap(), 0.25);
    push("pressure_deriv", pressure_deriv(0.5, 2.0).unwrap(), 1.0);
    push("theta(3,0,4)", lorentz_theta(3.0, 0.0, 4.0, C10).unwrap(), 0.8660254037844386467637231707529361834714);

    let alpha = alpha_c(&[0.5], &[1.0], &[0.5], 2.0, C10).unwrap()[0];
    push("alpha_c", alpha, 0.2487562189054726368159203980099502487562);

    let k0 = alpha / 0.5;
    let (n, rho, _) = densities_at(k0, 0.5 / 0.6, 1.0, 1.2, 2.0, 0.01).unwrap();
    push("rho", rho, 0.3466925530439606157259742060740535293302);
    push("n", n, 0.3454947484798231066887783305693753454947);

    let th = lorentz_theta(1.0, 2.0, 0.0, C10).unwrap();
    push("theta^2", th * th, 0.95);
    let l = lambdas_a0(1.0, 2.0, 0.0, 0.5, 2.0, C10).unwrap();
    push("lambda1", l.l1, 1.010421052631578947368421052631578947368);
    push("lambda2", l.l2, 0.9583157894736842105263157894736842105263);
    push("lambda3", l.l3, 1.0);
    push("a0", l.a0, 1.043497363796133567662565905096660808436);
    let (a11, a12) = a_coeffs(1.0, 2.0, 0.0, 0.5, 2.0, C10).unwrap();
    push("a11", a11, 1.010874340949033391915641476274165202109);
    push("a12", a12, 1.043497363796133567662565905096660808436);

    let rest = lambdas_a0(0.0, 0.0, 0.0, 0.5, 2.0, C10).unwrap();
    let (_, b12) = b_coeffs(rest.a0, 1.0, 1.0, 1.0, 1.0, 0.5, 2.0, 0.01);
    push("b12 at rest", b12, 0.99);

    let j10 = j_at(0.5, 1.0, 1.0, 1.0, 2.0, 0.01, 0, 0.0).unwrap();
    let j20 = j_at(0.5, 1.0, 1.0, 1.0, 2.0, 1.0 / 400.0, 0, 0.0).unwrap();
    let j_classical = j_at(0.5, 1.0, 1.0, 1.0, 2.0, 0.0, 0, 0.0).unwrap();
    push("J", j10, 1.015151259441065330186195237189457298868);
    push("J excess ratio c=10/c=20", (j10 - j_classical) / (j20 - j_classical), 4.030239222638078900199563552570319119852);
    out
}

/// Cylindrically regular data: every velocity is odd in x, ρ0 even.
pub fn odd_data_columns(n: usize) -> String {
    let mut s = String::new();
    for i in 0..=n {
        let x = i as f64 / n as f64;
        let u = 0.1 * x * (1.0 - x * x);
        s.push_str(&format!("{x} {} {u} {u} {}\n", 1.0 - x * x, 0.05 * (1.0 - x * x)));
    }
    s
}
