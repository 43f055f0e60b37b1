mod common;

use common::{brioschi_curvature, fd_christoffel, pullback_metric};
use neck_core::profiles::{base_profile, swing_profile, t_max_threshold, Jet, Profile};
use neck_core::surface::{christoffel_at, gauss_curvature, metric_at};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn metric_examples() {
    let f = base_profile(0.5).unwrap();
    let m = metric_at(&f, 0.0);
    assert_eq!((m.e, m.g), (1.0, 1.0));

    for theta in [0.0, 0.7, 2.0, 4.5] {
        let (e, cross, g) = pullback_metric(&f, 3.0, theta, 1e-5);
        let m = metric_at(&f, 3.0);
        assert!((e - m.e).abs() <= 1e-6, "E {e} vs {}", m.e);
        assert!((g - m.g).abs() <= 1e-6, "G {g} vs {}", m.g);
        assert!(cross.abs() <= 1e-6);
    }

    let s = swing_profile(0.2, 0.5).unwrap();
    for x in [-9.0, -5.0, 5.0, 6.3, 10.0] {
        assert_eq!(metric_at(&s, x), metric_at(&f, x));
    }
}

#[test]
fn christoffel_examples() {
    let f = base_profile(0.5).unwrap();
    for i in 0..=20 {
        let c = christoffel_at(&f, -1.0 + i as f64 * 0.1);
        assert_eq!((c.x_xx, c.x_tt, c.t_xt), (0.0, 0.0, 0.0));
    }
    let c = christoffel_at(&f, 2.5);
    let (xx, tt, xt) = fd_christoffel(&f, 2.5, 1e-5);
    assert!((c.x_xx - xx).abs() <= 1e-6, "{} vs {xx}", c.x_xx);
    assert!((c.x_tt - tt).abs() <= 1e-6, "{} vs {tt}", c.x_tt);
    assert!((c.t_xt - xt).abs() <= 1e-6, "{} vs {xt}", c.t_xt);
}

/// `h = 1 + (x - 1)^2` has `h'(1) = 0` and `h''(1) = 2`.
struct Parabola;

impl Profile for Parabola {
    fn jet(&self, x: f64) -> Jet {
        let y = x - 1.0;
        Jet::from_radius(1.0 + y * y, 2.0 * y, 2.0, 0.0)
    }
}

#[test]
fn slope_free_point_kills_the_rotation_terms() {
    let c = christoffel_at(&Parabola, 1.0);
    assert_eq!(c.x_tt, 0.0);
    assert_eq!(c.t_xt, 0.0);
    let s = swing_profile(0.07, 0.5).unwrap();
    let c = christoffel_at(&s, (1.0f64 / 0.07).sin());
    assert_eq!((c.x_tt, c.t_xt), (0.0, 0.0));
}

#[test]
fn curvature_examples() {
    let f = base_profile(0.5).unwrap();
    for i in 0..=100 {
        assert_eq!(gauss_curvature(&f, -1.0 + i as f64 * 0.02), 0.0);
    }
    let k = gauss_curvature(&f, 3.0);
    assert!(k < 0.0);
    let oracle = brioschi_curvature(&f, 3.0, 1e-4);
    assert!((k - oracle).abs() <= 1e-5, "K(3) = {k}, Brioschi {oracle}");

    let t_max = t_max_threshold(0.5);
    for t in [0.01, 0.1, 0.3, t_max] {
        let s = swing_profile(t, 0.5).unwrap();
        let worst = (0..500)
            .map(|i| -10.0 + 20.0 * i as f64 / 499.0)
            .map(|x| gauss_curvature(&s, x))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(worst <= 1e-12, "t {t}: max K = {worst}");
    }
}

#[test]
fn oracle_agreement_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let t_max = t_max_threshold(0.5);
    let profiles = [
        base_profile(0.5).unwrap(),
        swing_profile(0.05, 0.5).unwrap(),
        swing_profile(t_max, 0.5).unwrap(),
    ];
    for i in 0..1000 {
        let p = &profiles[i % profiles.len()];
        let x: f64 = rng.random_range(-10.0..10.0);
        let c = christoffel_at(p, x);
        let (xx, tt, xt) = fd_christoffel(p, x, 1e-5);
        let k = gauss_curvature(p, x);
        let kb = brioschi_curvature(p, x, 1e-4);
        let m = metric_at(p, x);
        let (e, _, g) = pullback_metric(p, x, rng.random_range(0.0..std::f64::consts::TAU), 1e-5);
        for (name, got, want) in [
            ("Γ^x_xx", c.x_xx, xx),
            ("Γ^x_θθ", c.x_tt, tt),
            ("Γ^θ_xθ", c.t_xt, xt),
            ("K", k, kb),
        ] {
            assert!(
                (got - want).abs() <= 1e-5,
                "{name} at x = {x}: {got} vs {want}"
            );
        }
        assert!((e - m.e).abs() <= 1e-5, "E at {x}: {e} vs {}", m.e);
        assert!((g - m.g).abs() <= 1e-5, "G at {x}: {g} vs {}", m.g);
    }
}
