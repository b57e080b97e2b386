//! Pointwise algebra against arbitrary-precision references.

mod common;

use proptest::prelude::*;
use relvac::coefficients::{a11_multiplier, a12_multiplier, a_coeffs, coefficient_bundle, lambdas_a0};
use relvac::thermo::{densities_at, lorentz_theta, InitialData, PhysParams, State};
use relvac::{Error, Grid, LightSpeed};

#[test]
fn pointwise_values_match_references() {
    for case in common::coefficient_cases() {
        assert!(case.rel_err() <= 1e-9, "{}: {} vs {}", case.name, case.got, case.want);
    }
}

#[test]
fn light_speed_doubling_quarters_the_j_excess() {
    let case = common::coefficient_cases()
        .into_iter()
        .find(|c| c.name.starts_with("J excess"))
        .unwrap();
    assert!((case.got / 4.0 - 1.0).abs() <= 0.12);
}

#[test]
fn superluminal_input_is_rejected() {
    let e = lorentz_theta(6.0, 0.0, 8.0, common::C10).unwrap_err();
    assert!(matches!(e, Error::Superluminal { .. }));
    assert_eq!(lorentz_theta(6.0, 0.0, 8.0, LightSpeed::Infinite).unwrap(), 1.0);
}

#[test]
fn density_breakdown_is_signalled() {
    assert!(densities_at(200.0, 1.0, 1.0, 1.0, 2.0, 0.01).is_none());
    assert_eq!(densities_at(0.3, 1.0, 1.0, 1.0, 2.0, 0.0), Some((0.3, 0.3, 1.0)));
}

#[test]
fn bundle_is_classical_at_infinite_light_speed() {
    let grid = Grid::new(32, 0.1).unwrap();
    let init = InitialData::demo(&grid, 2.0).unwrap();
    let params = PhysParams::new(LightSpeed::Infinite, 2.0, 0.0, 0.5).unwrap();
    let b = coefficient_bundle(&State::initial(&grid, &init), &init, &params, &grid).unwrap();
    for f in [&b.lambda1, &b.lambda2, &b.lambda3, &b.a0, &b.a11, &b.b12] {
        assert!(f.iter().all(|&v| v == 1.0));
    }
    // a₁₂ keeps its factor γ; its term carries 1/c² and vanishes
    assert!(b.a12.iter().all(|&v| v == 2.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relativistic_corrections_decay_like_inverse_c_squared(
        u in -1.0f64..1.0, v in -1.0f64..1.0, w in -1.0f64..1.0, rho in 0.0f64..1.0, c in 50.0f64..400.0,
    ) {
        let near = a_coeffs(u, v, w, rho, 2.0, LightSpeed::Finite(c)).unwrap();
        let far = a_coeffs(u, v, w, rho, 2.0, LightSpeed::Finite(2.0 * c)).unwrap();
        let bound = 4.0 * (u * u + v * v + w * w + 1.0) / (c * c);
        prop_assert!((near.0 - 1.0).abs() <= bound && (near.1 - 1.0).abs() <= bound);
        prop_assert!((far.0 - 1.0).abs() <= (near.0 - 1.0).abs() / 3.0 + 1e-15);
        prop_assert!((far.1 - 1.0).abs() <= (near.1 - 1.0).abs() / 3.0 + 1e-15);
    }

    #[test]
    fn a0_is_the_inverse_of_the_determinant(u in -3.0f64..3.0, v in -3.0f64..3.0, w in -3.0f64..3.0, rho in 0.0f64..2.0) {
        let c = 10.0;
        let l = lambdas_a0(u, v, w, rho, 2.0, LightSpeed::Finite(c)).unwrap();
        let th2 = 1.0 - (u * u + v * v + w * w) / (c * c);
        let q = 1.0 - 2.0 * rho / (c * c);
        let det = l.l2 * l.l3 + q * v * v * w * w / (c.powi(4) * th2 * th2);
        prop_assert!((l.a0 * det - 1.0).abs() < 1e-13);
        prop_assert!(l.l1 >= 1.0 && l.l3 >= 1.0 && l.l2 <= 1.0);
    }

    #[test]
    fn multipliers_reduce_to_their_classical_values(bracket in 0.5f64..1.0, rho in 0.0f64..1.0, theta in 0.5f64..1.0, gamma in 1.2f64..3.0) {
        prop_assert_eq!(a11_multiplier(bracket, rho, theta, gamma, 0.0), 1.0);
        prop_assert!((a12_multiplier(1.0, rho, 1.0, gamma, 0.0) - gamma).abs() < 1e-15);
        prop_assert!(a11_multiplier(bracket, rho, theta, gamma, 0.01) > 0.0);
    }
}
