//! Numerics for nonpositively curved surfaces of revolution.
//!
//! A surface of revolution `M_h` is described by a radius profile `h(x) >= 1`
//! rotated about the x-axis, with metric `ds^2 = (1 + h'^2) dx^2 + h^2 dθ^2`.
//! This crate builds the "swinging neck" family of such profiles, whose unique
//! minimal closed geodesic sits at `x = sin(1/t)` and oscillates ever faster as
//! `t -> 0`, while the flat limit `t = 0` has a whole band of minimal circles.
//!
//! The modules, bottom-up:
//!
//! - [`profiles`]: the base profile `f`, the bump `α`, the swinging family and
//!   its convexity threshold.
//! - [`surface`]: metric, Christoffel symbols and Gaussian curvature.
//! - [`geodesic`]: fixed-step RK4 geodesic integration with Clairaut and speed
//!   certificates, and convergence of geodesics under varying metrics.
//! - [`shorten`]: discrete loops and Birkhoff-style curve shortening to minimal
//!   closed geodesics.
//! - [`moduli`]: minimizer sets, flat ribbons, parameter sweeps and the
//!   boundedness / stability checks over a family of metrics.
//!
//! Everything here is `no_std` with `alloc`; IO lives in the `neck` crate.
#![no_std]
// `!(x > 0.0)` is the NaN-rejecting form of a positivity check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod geodesic;
pub mod math;
pub mod moduli;
pub mod profiles;
pub mod shorten;
pub mod surface;

pub use error::{NeckError, Result};
pub use profiles::{Jet, NeckProfile, Profile, ProfileKind};
