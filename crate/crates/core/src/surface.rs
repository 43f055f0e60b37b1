//! First fundamental form, Christoffel symbols and Gaussian curvature of the
//! surface of revolution `M_h` in the global chart `(x, θ)`.
//!
//! The embedding is `(x, θ) ↦ (x, h(x) cos θ, h(x) sin θ)`, so
//! `ds^2 = E dx^2 + G dθ^2` with `E = 1 + h'^2`, `G = h^2` and no cross term.

use crate::profiles::Profile;

/// Metric coefficients at a point; the `dx dθ` term vanishes identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricPoint {
    pub e: f64,
    pub g: f64,
}

impl MetricPoint {
    /// Squared norm of the tangent vector `(vx, vθ)`.
    #[inline]
    pub fn norm_sq(&self, vx: f64, vtheta: f64) -> f64 {
        self.e * vx * vx + self.g * vtheta * vtheta
    }
}

/// The three connection coefficients that are not identically zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChristoffelPoint {
    /// `Γ^x_xx = h' h'' / (1 + h'^2)`
    pub x_xx: f64,
    /// `Γ^x_θθ = -h h' / (1 + h'^2)`
    pub x_tt: f64,
    /// `Γ^θ_xθ = Γ^θ_θx = h' / h`
    pub t_xt: f64,
}

impl ChristoffelPoint {
    /// `Γ(v, v)` for `v = (vx, vθ)`, returned as `(x, θ)` components.
    #[inline]
    pub fn contract(&self, vx: f64, vtheta: f64) -> (f64, f64) {
        (
            self.x_xx * vx * vx + self.x_tt * vtheta * vtheta,
            2.0 * self.t_xt * vx * vtheta,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSample {
    pub x: f64,
    pub k: f64,
}

pub fn metric_at<P: Profile + ?Sized>(p: &P, x: f64) -> MetricPoint {
    let j = p.jet(x);
    MetricPoint {
        e: 1.0 + j.d1 * j.d1,
        g: j.h * j.h,
    }
}

pub fn christoffel_at<P: Profile + ?Sized>(p: &P, x: f64) -> ChristoffelPoint {
    let j = p.jet(x);
    christoffel_from(j.h, j.d1, j.d2)
}

#[inline]
pub(crate) fn christoffel_from(h: f64, d1: f64, d2: f64) -> ChristoffelPoint {
    let e = 1.0 + d1 * d1;
    ChristoffelPoint {
        x_xx: d1 * d2 / e,
        x_tt: -h * d1 / e,
        t_xt: d1 / h,
    }
}

/// `K = -h'' / (h (1 + h'^2)^2)`.
pub fn gauss_curvature<P: Profile + ?Sized>(p: &P, x: f64) -> f64 {
    let j = p.jet(x);
    let e = 1.0 + j.d1 * j.d1;
    -j.d2 / (j.h * e * e)
}

pub fn curvature_sample<P: Profile + ?Sized>(p: &P, x: f64) -> CurvatureSample {
    CurvatureSample {
        x,
        k: gauss_curvature(p, x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{base_profile, swing_profile};

    #[test]
    fn flat_core_is_a_unit_cylinder() {
        let p = base_profile(0.5).unwrap();
        for &x in &[-1.0, -0.3, 0.0, 0.8, 1.0] {
            let m = metric_at(&p, x);
            assert_eq!((m.e, m.g), (1.0, 1.0));
            let c = christoffel_at(&p, x);
            assert_eq!((c.x_xx, c.x_tt, c.t_xt), (0.0, 0.0, 0.0));
            assert_eq!(gauss_curvature(&p, x), 0.0);
        }
    }

    #[test]
    fn swing_metric_agrees_with_base_far_out() {
        let base = base_profile(0.5).unwrap();
        let sw = swing_profile(0.2, 0.5).unwrap();
        for &x in &[-9.0, -5.0, 5.0, 7.5] {
            assert_eq!(metric_at(&base, x), metric_at(&sw, x));
        }
    }

    #[test]
    fn slope_free_points_have_no_rotation_terms() {
        // At the swing minimum h' = 0 while h'' > 0.
        let sw = swing_profile(0.15, 0.5).unwrap();
        let x = sw.swing_center().unwrap();
        let c = christoffel_at(&sw, x);
        assert!(sw.d2(x) > 0.0);
        assert_eq!(c.x_tt, 0.0);
        assert_eq!(c.t_xt, 0.0);
    }

    #[test]
    fn curvature_negative_on_the_convex_flanks() {
        let p = base_profile(0.5).unwrap();
        assert!(gauss_curvature(&p, 3.0) < 0.0);
        assert!(gauss_curvature(&p, -1.5) < 0.0);
    }
}
