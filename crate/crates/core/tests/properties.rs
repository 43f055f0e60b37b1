mod common;

use common::{base_oracle_kernel, central_diff5};
use neck_core::profiles::{t_max_threshold, NeckProfile, Profile};
use neck_core::shorten::{init_loop, loop_length, shorten_step, LoopInit};
use neck_core::surface::gauss_curvature;
use proptest::prelude::*;

fn delta() -> impl Strategy<Value = f64> {
    0.05f64..4.0
}

/// A swing profile with `t` drawn from `[0, t_max(delta)]`.
fn swing() -> impl Strategy<Value = NeckProfile> {
    (delta(), 0.0f64..=1.0).prop_map(|(d, u)| {
        NeckProfile::base(d)
            .unwrap()
            .with_swing(u * t_max_threshold(d))
            .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn base_is_even(d in delta(), x in -12.0f64..12.0) {
        let f = NeckProfile::base(d).unwrap();
        let (a, b) = (f.jet(x), f.jet(-x));
        prop_assert!((a.h - b.h).abs() <= 1e-14 * a.h);
        prop_assert!((a.d1 + b.d1).abs() <= 1e-14 * a.d1.abs().max(1.0));
        prop_assert!((a.d2 - b.d2).abs() <= 1e-14);
    }

    #[test]
    fn radius_floor_and_monotone_flanks(p in swing(), x in 0.0f64..12.0, dx in 0.0f64..1.0) {
        prop_assert!(p.eval(x) >= 1.0);
        prop_assert!(p.excess(x) >= 0.0);
        if x >= 4.0 {
            prop_assert!(p.eval(x + dx) >= p.eval(x));
            prop_assert!(p.eval(-x - dx) >= p.eval(-x));
        }
    }

    #[test]
    fn derivatives_match_finite_differences(p in swing(), x in -10.0f64..10.0) {
        let j = p.jet(x);
        let h = 1e-4;
        prop_assert!((j.d1 - central_diff5(|y| p.eval(y), x, h)).abs() <= 1e-6);
        prop_assert!((j.d2 - central_diff5(|y| p.d1(y), x, h)).abs() <= 1e-6);
        prop_assert!((j.d3 - central_diff5(|y| p.d2(y), x, h)).abs() <= 1e-6);
    }

    #[test]
    fn swing_stays_close_to_the_base(p in swing(), x in -10.0f64..10.0) {
        let f = p.to_base();
        prop_assert!((p.eval(x) - f.eval(x)).abs() <= p.swing_amplitude() * (1.0 + 1e-12));
        prop_assert!(p.swing_amplitude() <= libm::exp(-1.0 / p.t()) || p.t() == 0.0);
    }

    #[test]
    fn curvature_is_nonpositive(p in swing(), x in -10.0f64..10.0) {
        prop_assert!(gauss_curvature(&p, x) <= 1e-12);
    }

    #[test]
    fn base_matches_quadrature(d in delta(), x in -6.0f64..6.0) {
        let f = NeckProfile::base(d).unwrap();
        let want = base_oracle_kernel(d, x);
        prop_assert!((f.eval(x) - want).abs() <= 1e-8 * want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shortening_step_never_lengthens(
        p in swing(),
        x0 in -3.0f64..3.0,
        noise in 0.0f64..0.8,
        seed in any::<u64>(),
        steps in 1usize..20,
    ) {
        let mut lp = init_loop(LoopInit::Perturbed { x0, noise, seed }, 64).unwrap();
        let mut len = loop_length(&p, &lp);
        for _ in 0..steps {
            let report = shorten_step(&p, &lp);
            prop_assert!(report.excess_after <= report.excess_before);
            lp = report.result;
            let next = loop_length(&p, &lp);
            prop_assert!(next <= len + 1e-12);
            prop_assert_eq!(lp.winding_number(), 1);
            len = next;
        }
    }
}
