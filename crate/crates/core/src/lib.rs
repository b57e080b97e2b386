//! Lagrangian solver for cylindrically symmetric relativistic Euler flow
//! with a physical vacuum boundary, its classical (infinite light speed)
//! limit, and the diagnostics and sweep harness used to study the limit.
//!
//! The fluid occupies the reference interval x ∈ [0, 1]: x = 0 is the
//! symmetry axis, x = 1 the vacuum boundary where the density vanishes.
//! Unknowns are the flow map r(x, t) and the radial, angular and axial
//! velocities (u, υ, ω); densities are reconstructed from the flow map.

// Negated float comparisons are deliberate: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coefficients;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod harness;
pub mod record;
pub mod thermo;

pub use error::{Error, Result};
pub use grid::Grid;
pub use thermo::{InitialData, LightSpeed, PhysParams, State};
