mod common;

use common::{base_oracle, base_oracle_kernel, template};
use neck_core::profiles::{
    base_profile, bump_alpha, swing_profile, t_max_threshold, verify_profile_conditions, Bump, Jet,
    NeckProfile, Profile, COND_STRICT_CONVEX, COND_SWING_CONVEX,
};
use neck_core::NeckError;

#[test]
fn flat_core_values() {
    let f = base_profile(0.5).unwrap();
    assert_eq!(f.eval(0.0), 1.0);
    assert_eq!(f.d1(1.0), 0.0);
    assert_eq!(f.d2(1.0), 0.0);
}

#[test]
fn f3_matches_double_quadrature() {
    let f = base_profile(0.5).unwrap();
    let nested = base_oracle(0.5, 3.0);
    let kernel = base_oracle_kernel(0.5, 3.0);
    assert!(
        (nested - kernel).abs() < 1e-10,
        "oracles disagree: {nested} vs {kernel}"
    );
    assert!(
        (f.eval(3.0) - nested).abs() <= 1e-8,
        "f(3) = {} vs {nested}",
        f.eval(3.0)
    );
}

#[test]
fn f_matches_quadrature_across_the_transition() {
    for delta in [0.1, 0.5, 2.0] {
        let f = base_profile(delta).unwrap();
        for x in [1.01, 1.2, 1.5, 1.9, 2.0, 2.3, 4.0, 7.5, -1.7, -3.0] {
            let want = base_oracle_kernel(delta, x);
            assert!(
                (f.eval(x) - want).abs() <= 1e-8,
                "delta {delta}, x {x}: {} vs {want}",
                f.eval(x)
            );
            // The excess carries the same value without the leading 1.
            assert!((f.excess(x) - (want - 1.0)).abs() <= 1e-8);
        }
    }
}

#[test]
fn d2_is_the_template() {
    let f = base_profile(0.5).unwrap();
    for i in 0..=400 {
        let x = -5.0 + i as f64 * 0.025;
        let want = 0.5 * template(x.abs());
        assert!((f.d2(x) - want).abs() <= 1e-15, "x {x}");
    }
}

#[test]
fn bump_examples() {
    for t in [-2.0, -0.7, 0.0, 0.4, 1.0, 2.0] {
        assert_eq!(bump_alpha(t, t), 0.0);
    }
    assert_eq!(bump_alpha(5.0, 0.0), 0.0);
    assert_eq!(bump_alpha(-4.0, 1.0), 0.0);
    // χ(0) = 1, so α(0, 1) = (0 - 1)^2 / 36.
    assert!((bump_alpha(0.0, 1.0) - 1.0 / 36.0).abs() < 1e-17);
}

#[test]
fn bump_shape() {
    let b = Bump::default();
    for t in [-2.0, -1.0, -0.3, 0.0, 0.8, 2.0] {
        let mut min = (f64::INFINITY, 0.0);
        for i in 0..=8000 {
            let x = -4.0 + i as f64 * 1e-3;
            let [a, _, a2, _] = b.derivatives(x, t);
            assert!((0.0..=1.0).contains(&a), "α({x}, {t}) = {a}");
            if x.abs() <= 3.0 {
                assert!(a2 > 0.0, "α'' <= 0 at x = {x}, t = {t}");
                if a < min.0 {
                    min = (a, x);
                }
            }
        }
        assert!(
            (min.1 - t).abs() < 1e-9,
            "min of α(·, {t}) on [-3,3] at {}",
            min.1
        );
    }
    assert!(Bump::new(0.0).is_err());
    assert!(Bump::new(1.0 / 30.0).is_err());
    assert!(Bump::new(1.0 / 72.0).is_ok());
}

#[test]
fn swing_examples() {
    let f = base_profile(0.5).unwrap();
    let s0 = swing_profile(0.0, 0.5).unwrap();
    for i in 0..=200 {
        let x = -10.0 + i as f64 * 0.1;
        assert_eq!(s0.jet(x), f.jet(x));
    }
    for t in [0.02, 1.0 / (10.0 * std::f64::consts::PI), 0.1, 0.3] {
        let s = swing_profile(t, 0.5).unwrap();
        let c = (1.0 / t).sin();
        assert_eq!(s.eval(c), 1.0);
        assert_eq!(s.excess(c), 0.0);
        let (arg, _) = common::brute_argmin(&s, -6.0, 6.0, 1e-4);
        assert!((arg - c).abs() <= 1e-4, "t {t}: argmin {arg} vs {c}");
        assert_eq!(s.eval(5.0), f.eval(5.0));
        assert_eq!(s.eval(-5.0), f.eval(-5.0));
    }
}

#[test]
fn t_max_examples() {
    let c = Bump::default().second_derivative_bound();
    // No constraint binds when delta >= C.
    assert_eq!(t_max_threshold(c), 1.0);
    assert_eq!(t_max_threshold(2.0 * c), 1.0);

    // Grid-maximization oracle at resolution 1e-3 over both the position
    // and the center.
    let mut oracle = 0.0f64;
    for i in 0..=2000 {
        let x = 2.0 + i as f64 * 1e-3;
        for j in 0..=2000 {
            let center = -1.0 + j as f64 * 1e-3;
            let a2 = Bump::default().derivatives(x, center)[2].abs();
            let am = Bump::default().derivatives(-x, center)[2].abs();
            oracle = oracle.max(a2).max(am);
        }
    }
    assert!(c >= oracle, "C = {c} undershoots the grid maximum {oracle}");
    assert!((c - oracle) / oracle <= 1e-5, "C = {c}, grid {oracle}");
    let t_max = t_max_threshold(0.5);
    assert!((t_max - 1.0 / (c / 0.5).ln()).abs() < 1e-15);
    assert!((t_max - 1.0 / (oracle / 0.5).ln()).abs() < 1e-5);
}

#[test]
fn convexity_holds_at_t_max() {
    for delta in [0.5, 0.1, 2.0] {
        let t_max = t_max_threshold(delta);
        let s = swing_profile(t_max, delta).unwrap();
        let worst = (0..=200_000)
            .map(|i| -10.0 + i as f64 * 1e-4)
            .map(|x| s.d2(x))
            .fold(f64::INFINITY, f64::min);
        assert!(worst >= -1e-12, "delta {delta}: min f_t'' = {worst}");
    }
}

#[test]
fn above_t_max_is_rejected_with_the_margin() {
    let t_max = t_max_threshold(0.5);
    let err = swing_profile(t_max * 1.01, 0.5).unwrap_err();
    match err {
        NeckError::ConvexityViolated {
            t_max: reported,
            margin,
            forcing,
            delta,
            ..
        } => {
            assert_eq!(reported, t_max);
            assert!(margin < 0.0);
            assert!((delta - forcing - margin).abs() < 1e-15);
        }
        other => panic!("unexpected error {other}"),
    }
    assert!(swing_profile(1.5, 0.5).is_err());
    assert!(swing_profile(-0.1, 0.5).is_err());
    assert!(base_profile(0.0).is_err());
    assert!(base_profile(-1.0).is_err());
    assert!(base_profile(f64::NAN).is_err());
}

#[test]
fn base_conditions_pass() {
    for delta in [0.5, 0.05, 3.0] {
        let report = verify_profile_conditions(&base_profile(delta).unwrap(), 1e-3).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }
}

#[test]
fn swing_conditions_pass() {
    let base = NeckProfile::base(0.5).unwrap();
    let t_max = t_max_threshold(0.5);
    for t in [0.01, 0.05, 0.1, 0.25, t_max] {
        let report = verify_profile_conditions(&base.with_swing(t).unwrap(), 1e-3).unwrap();
        assert!(report.all_pass(), "t {t}: {report:?}");
        assert!(report.get(COND_SWING_CONVEX).unwrap().margin >= -1e-12);
    }
}

/// Base profile with a dent that makes `f''(1.5) < 0`.
struct Dented(NeckProfile);

impl Profile for Dented {
    fn jet(&self, x: f64) -> Jet {
        let j = self.0.jet(x);
        let y = x - 1.5;
        let w = 0.05;
        let g = (-y * y / (2.0 * w * w)).exp();
        let a = 0.5;
        // Only h'' is dented; the convexity check reads nothing else.
        Jet::from_radius(j.h, j.d1, j.d2 - a * g, j.d3)
    }
    fn delta(&self) -> Option<f64> {
        Some(0.5)
    }
}

#[test]
fn corrupted_profile_fails_strict_convexity() {
    let p = Dented(base_profile(0.5).unwrap());
    assert!(p.d2(1.5) < 0.0);
    let report = verify_profile_conditions(&p, 1e-3).unwrap();
    let c = report.get(COND_STRICT_CONVEX).unwrap();
    assert!(!c.pass);
    assert!(c.margin < 0.0);
    assert!((c.worst_x - 1.5).abs() < 0.05, "worst at {}", c.worst_x);
    assert!(!report.all_pass());
    assert!(verify_profile_conditions(&p, 0.0).is_err());
}
