//! Radius profiles `h(x) >= 1` of surfaces of revolution.
//!
//! The base profile `f` is flat (`f = 1`) on `[-1, 1]`, strictly convex for
//! `|x| > 1`, and has `f'' = delta` for `|x| >= 2`. Its second derivative is
//! `delta * s(|x|)` with `s` the standard C^∞ transition from 0 at `r <= 1` to
//! 1 at `r >= 2`. The two antiderivatives of `s` on `[1, 2]` have no closed
//! form; they are tabulated once on a fine knot grid and completed between
//! knots with a local Gauss–Legendre rule, so `f`, `f'` are accurate to
//! rounding while `f''`, `f'''` stay closed-form.
//!
//! The swinging family adds `e^(-1/t) α(x, sin(1/t))`, where the bump
//! `α(x, c) = k (x - c)^2 χ(x)` is cut off smoothly between `|x| = 3` and
//! `|x| = 4`.
//!
//! Every profile also reports `excess = h - 1` computed without cancellation.
//! For small `t` the swing perturbation `e^(-1/t)` is far below the spacing of
//! doubles near 1, so comparisons between radii on the flat band have to be
//! made in excess space.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{NeckError, Result};
use crate::math;

/// Value and derivatives of a profile at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub h: f64,
    /// `h - 1`, accurate in relative terms even when `h` rounds to 1.
    pub excess: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet {
    /// Builds a jet from `h` directly; `excess` is `h - 1` with ordinary rounding.
    pub fn from_radius(h: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Jet {
            h,
            excess: h - 1.0,
            d1,
            d2,
            d3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind {
    Base,
    Swing { t: f64 },
    Custom,
}

impl ProfileKind {
    /// Swing parameter, with the base profile at `t = 0`.
    pub fn parameter(&self) -> Option<f64> {
        match *self {
            ProfileKind::Base => Some(0.0),
            ProfileKind::Swing { t } => Some(t),
            ProfileKind::Custom => None,
        }
    }
}

/// A radius function `h >= 1` with exact derivatives up to order three.
pub trait Profile {
    fn jet(&self, x: f64) -> Jet;

    fn eval(&self, x: f64) -> f64 {
        self.jet(x).h
    }

    fn excess(&self, x: f64) -> f64 {
        self.jet(x).excess
    }

    fn d1(&self, x: f64) -> f64 {
        self.jet(x).d1
    }

    fn d2(&self, x: f64) -> f64 {
        self.jet(x).d2
    }

    fn d3(&self, x: f64) -> f64 {
        self.jet(x).d3
    }

    fn kind(&self) -> ProfileKind {
        ProfileKind::Custom
    }

    /// Convexity floor `f'' >= delta` for `|x| >= 2`, when the profile has one.
    fn delta(&self) -> Option<f64> {
        None
    }
}

impl<P: Profile + ?Sized> Profile for &P {
    fn jet(&self, x: f64) -> Jet {
        (**self).jet(x)
    }
    fn eval(&self, x: f64) -> f64 {
        (**self).eval(x)
    }
    fn excess(&self, x: f64) -> f64 {
        (**self).excess(x)
    }
    fn d1(&self, x: f64) -> f64 {
        (**self).d1(x)
    }
    fn d2(&self, x: f64) -> f64 {
        (**self).d2(x)
    }
    fn d3(&self, x: f64) -> f64 {
        (**self).d3(x)
    }
    fn kind(&self) -> ProfileKind {
        (**self).kind()
    }
    fn delta(&self) -> Option<f64> {
        (**self).delta()
    }
}

/// Smooth transition `s(r)` and its first three derivatives.
///
/// `s(r) = φ(r-1) / (φ(r-1) + φ(2-r))` with `φ(u) = e^(-1/u)` for `u > 0`,
/// written as the logistic `1 / (1 + e^q)`, `q = 1/(r-1) - 1/(2-r)`.
pub fn transition(r: f64) -> [f64; 4] {
    if r <= 1.0 {
        return [0.0; 4];
    }
    if r >= 2.0 {
        return [1.0, 0.0, 0.0, 0.0];
    }
    let u = r - 1.0;
    let v = 2.0 - r;
    let q = 1.0 / u - 1.0 / v;
    // l = 1/(1+e^q), lm = 1 - l, both without cancellation.
    let (l, lm) = if q > 0.0 {
        let e = math::exp(-q);
        (e / (1.0 + e), 1.0 / (1.0 + e))
    } else {
        let e = math::exp(q);
        (1.0 / (1.0 + e), e / (1.0 + e))
    };
    let p = l * lm;
    if p == 0.0 {
        return [l, 0.0, 0.0, 0.0];
    }
    let (u2, v2) = (u * u, v * v);
    let q1 = -1.0 / u2 - 1.0 / v2;
    let q2 = 2.0 / (u2 * u) - 2.0 / (v2 * v);
    let q3 = -6.0 / (u2 * u2) - 6.0 / (v2 * v2);
    let l1 = -p;
    let l2 = p * (lm - l);
    let l3 = -p * (1.0 - 6.0 * l * lm);
    [
        l,
        l1 * q1,
        l2 * q1 * q1 + l1 * q2,
        l3 * q1 * q1 * q1 + 3.0 * l2 * q1 * q2 + l1 * q3,
    ]
}

const TABLE_INTERVALS: usize = 1024;

/// Antiderivatives `S1(r) = ∫_1^r s` and `S2(r) = ∫_1^r S1` on knots of `[1, 2]`.
#[derive(Debug)]
struct TransitionIntegrals {
    s1: Vec<f64>,
    s2: Vec<f64>,
}

impl TransitionIntegrals {
    fn build() -> Self {
        let n = TABLE_INTERVALS;
        let w = 1.0 / n as f64;
        let mut s1 = Vec::with_capacity(n + 1);
        let mut s2 = Vec::with_capacity(n + 1);
        s1.push(0.0);
        s2.push(0.0);
        for j in 0..n {
            let a = 1.0 + j as f64 * w;
            let b = a + w;
            let (mut i0, mut i1) = (0.0, 0.0);
            const SUB: usize = 4;
            for k in 0..SUB {
                let lo = a + k as f64 * w / SUB as f64;
                let hi = lo + w / SUB as f64;
                let (p0, p1) = local_moments(lo, hi, b);
                i0 += p0;
                i1 += p1;
            }
            let (prev1, prev2) = (s1[j], s2[j]);
            s1.push(prev1 + i0);
            s2.push(prev2 + prev1 * w + i1);
        }
        TransitionIntegrals { s1, s2 }
    }

    /// `(S1(r), S2(r))` for `r >= 0`.
    fn at(&self, r: f64) -> (f64, f64) {
        if r <= 1.0 {
            return (0.0, 0.0);
        }
        let n = TABLE_INTERVALS;
        if r >= 2.0 {
            let y = r - 2.0;
            let (a1, a2) = (self.s1[n], self.s2[n]);
            return (a1 + y, a2 + a1 * y + 0.5 * y * y);
        }
        let pos = (r - 1.0) * n as f64;
        let j = (math::floor(pos) as usize).min(n - 1);
        let a = 1.0 + j as f64 / n as f64;
        let (i0, i1) = local_moments(a, r, r);
        (self.s1[j] + i0, self.s2[j] + self.s1[j] * (r - a) + i1)
    }
}

/// `(∫_lo^hi s(u) du, ∫_lo^hi (end - u) s(u) du)` by one Gauss–Legendre panel.
fn local_moments(lo: f64, hi: f64, end: f64) -> (f64, f64) {
    math::gauss_legendre8_pair(lo, hi, |u| {
        let s = transition(u)[0];
        (s, (end - u) * s)
    })
}

/// The bump `α(x, c) = k (x - c)^2 χ(x)`, with `χ = 1` on `[-3, 3]` and
/// `χ = 0` outside `[-4, 4]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    coefficient: f64,
}

impl Default for Bump {
    fn default() -> Self {
        Bump {
            coefficient: Self::DEFAULT_COEFFICIENT,
        }
    }
}

impl Bump {
    pub const DEFAULT_COEFFICIENT: f64 = 1.0 / 36.0;
    pub const INNER_CUTOFF: f64 = 3.0;
    pub const OUTER_CUTOFF: f64 = 4.0;

    /// `coefficient` must lie in `(0, 1/36]` so that `α` maps into `[0, 1]`.
    pub fn new(coefficient: f64) -> Result<Self> {
        if !(coefficient > 0.0 && coefficient <= Self::DEFAULT_COEFFICIENT) {
            return Err(NeckError::InvalidParameter {
                name: "bump coefficient",
                value: coefficient,
                reason: "must lie in (0, 1/36] to keep the bump within [0, 1]",
            });
        }
        Ok(Bump { coefficient })
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    /// `[α, ∂α/∂x, ∂²α/∂x², ∂³α/∂x³]` at `x` for bump center `center`.
    pub fn derivatives(&self, x: f64, center: f64) -> [f64; 4] {
        let r = x.abs();
        if r >= Self::OUTER_CUTOFF {
            return [0.0; 4];
        }
        let sg = if x < 0.0 { -1.0 } else { 1.0 };
        let tr = transition(r - 2.0);
        let chi = [1.0 - tr[0], -sg * tr[1], -tr[2], -sg * tr[3]];
        let y = x - center;
        let k = self.coefficient;
        [
            k * y * y * chi[0],
            k * (2.0 * y * chi[0] + y * y * chi[1]),
            k * (2.0 * chi[0] + 4.0 * y * chi[1] + y * y * chi[2]),
            k * (6.0 * chi[1] + 6.0 * y * chi[2] + y * y * chi[3]),
        ]
    }

    pub fn value(&self, x: f64, center: f64) -> f64 {
        self.derivatives(x, center)[0]
    }

    /// `max_{c ∈ [-1, 1]} |∂²α/∂x²(x, c)|`; the second derivative is
    /// quadratic in `c`, so the maximum is taken at an endpoint or the vertex.
    fn max_abs_second(&self, x: f64) -> f64 {
        let r = x.abs();
        if r >= Self::OUTER_CUTOFF {
            return 0.0;
        }
        let sg = if x < 0.0 { -1.0 } else { 1.0 };
        let tr = transition(r - 2.0);
        let (c0, c1, c2) = (1.0 - tr[0], -sg * tr[1], -tr[2]);
        let k = self.coefficient;
        let q = |y: f64| (k * (2.0 * c0 + 4.0 * y * c1 + y * y * c2)).abs();
        let mut best = q(x - 1.0).max(q(x + 1.0));
        if c2 != 0.0 {
            let vertex = -2.0 * c1 / c2;
            if vertex > x - 1.0 && vertex < x + 1.0 {
                best = best.max(q(vertex));
            }
        }
        best
    }

    /// `C = sup |∂²α/∂x²|` over `2 <= |x| <= 4` and all centers in `[-1, 1]`.
    ///
    /// Grid maximization at spacing `1e-3`, then a golden-section polish of
    /// the best cell so the returned value does not undershoot the supremum.
    pub fn second_derivative_bound(&self) -> f64 {
        const STEP: f64 = 1e-3;
        let n = (2.0 / STEP) as usize;
        let (mut best, mut best_x) = (0.0, 2.0);
        // |α''(-x, c)| = |α''(x, -c)|, so the positive side suffices.
        for i in 0..=n {
            let x = 2.0 + i as f64 * STEP;
            let v = self.max_abs_second(x);
            if v > best {
                best = v;
                best_x = x;
            }
        }
        let polished = math::golden_section(
            |x| -self.max_abs_second(x),
            (best_x - STEP).max(2.0),
            (best_x + STEP).min(4.0),
            1e-12,
        );
        best.max(-polished.value)
    }
}

/// Largest `t` for which the swing profile is certified convex:
/// `e^(-1/t) C <= delta`, capped at 1.
pub fn t_max_threshold(delta: f64) -> f64 {
    Bump::default().t_max(delta)
}

impl Bump {
    pub fn t_max(&self, delta: f64) -> f64 {
        let c = self.second_derivative_bound();
        if c <= delta {
            return 1.0;
        }
        (1.0 / math::ln(c / delta)).min(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Swing {
    t: f64,
    amplitude: f64,
    center: f64,
}

/// The base profile `f` and the swinging family `f_t`.
///
/// Cloning is cheap: the antiderivative table is shared.
#[derive(Debug, Clone)]
pub struct NeckProfile {
    delta: f64,
    bump: Bump,
    table: Arc<TransitionIntegrals>,
    swing: Option<Swing>,
}

/// Base profile with convexity floor `delta` and the default bump.
pub fn base_profile(delta: f64) -> Result<NeckProfile> {
    NeckProfile::base(delta)
}

/// Swing profile `f_t` for `0 <= t <= t_max(delta)`.
pub fn swing_profile(t: f64, delta: f64) -> Result<NeckProfile> {
    NeckProfile::base(delta)?.with_swing(t)
}

/// `α(x, t)` for the default bump.
pub fn bump_alpha(x: f64, t: f64) -> f64 {
    Bump::default().value(x, t)
}

impl NeckProfile {
    pub fn base(delta: f64) -> Result<Self> {
        Self::with_bump(delta, Bump::default())
    }

    pub fn with_bump(delta: f64, bump: Bump) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(NeckError::InvalidParameter {
                name: "delta",
                value: delta,
                reason: "convexity floor must be positive and finite",
            });
        }
        Ok(NeckProfile {
            delta,
            bump,
            table: Arc::new(TransitionIntegrals::build()),
            swing: None,
        })
    }

    /// Swing member `f_t` sharing this profile's tables. Rejects `t` above
    /// the convexity threshold.
    pub fn with_swing(&self, t: f64) -> Result<Self> {
        let out = self.with_swing_unchecked(t)?;
        if t > 0.0 {
            let t_max = self.bump.t_max(self.delta);
            if t > t_max {
                let forcing = math::exp(-1.0 / t) * self.bump.second_derivative_bound();
                return Err(NeckError::ConvexityViolated {
                    t,
                    t_max,
                    forcing,
                    delta: self.delta,
                    margin: self.delta - forcing,
                });
            }
        }
        Ok(out)
    }

    /// Like [`with_swing`](Self::with_swing) but without the convexity
    /// certificate; only `t ∈ [0, 1]` is enforced.
    pub fn with_swing_unchecked(&self, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(NeckError::InvalidParameter {
                name: "t",
                value: t,
                reason: "swing parameter must lie in [0, 1]",
            });
        }
        let swing = Swing {
            t,
            amplitude: if t > 0.0 { math::exp(-1.0 / t) } else { 0.0 },
            center: if t > 0.0 { math::sin(1.0 / t) } else { 0.0 },
        };
        Ok(NeckProfile {
            delta: self.delta,
            bump: self.bump,
            table: Arc::clone(&self.table),
            swing: Some(swing),
        })
    }

    /// The `t = 0` member with the same tables.
    pub fn to_base(&self) -> Self {
        NeckProfile {
            swing: None,
            ..self.clone()
        }
    }

    pub fn delta_value(&self) -> f64 {
        self.delta
    }

    pub fn bump(&self) -> Bump {
        self.bump
    }

    pub fn t(&self) -> f64 {
        self.swing.map_or(0.0, |s| s.t)
    }

    /// `sin(1/t)`, the location of the unique minimum, for `t > 0`.
    pub fn swing_center(&self) -> Option<f64> {
        self.swing.filter(|s| s.t > 0.0).map(|s| s.center)
    }

    /// `e^(-1/t)`; zero for the base profile.
    pub fn swing_amplitude(&self) -> f64 {
        self.swing.map_or(0.0, |s| s.amplitude)
    }

    fn base_jet(&self, x: f64) -> Jet {
        let r = x.abs();
        let sg = if x < 0.0 { -1.0 } else { 1.0 };
        let (s1, s2) = self.table.at(r);
        let tr = transition(r);
        let excess = self.delta * s2;
        Jet {
            h: 1.0 + excess,
            excess,
            d1: sg * self.delta * s1,
            d2: self.delta * tr[0],
            d3: sg * self.delta * tr[1],
        }
    }
}

impl Profile for NeckProfile {
    fn jet(&self, x: f64) -> Jet {
        let mut jet = self.base_jet(x);
        if let Some(sw) = self.swing {
            if sw.amplitude > 0.0 {
                let a = self.bump.derivatives(x, sw.center);
                let bump_excess = sw.amplitude * a[0];
                jet.excess += bump_excess;
                jet.h += bump_excess;
                jet.d1 += sw.amplitude * a[1];
                jet.d2 += sw.amplitude * a[2];
                jet.d3 += sw.amplitude * a[3];
            }
        }
        jet
    }

    fn d2(&self, x: f64) -> f64 {
        let mut v = self.delta * transition(x.abs())[0];
        if let Some(sw) = self.swing {
            if sw.amplitude > 0.0 {
                v += sw.amplitude * self.bump.derivatives(x, sw.center)[2];
            }
        }
        v
    }

    fn kind(&self) -> ProfileKind {
        match self.swing {
            None => ProfileKind::Base,
            Some(s) => ProfileKind::Swing { t: s.t },
        }
    }

    fn delta(&self) -> Option<f64> {
        Some(self.delta)
    }
}

/// One checked condition with its worst-case margin on the grid.
///
/// `margin >= 0` means satisfied; its magnitude is how far from the boundary
/// the worst grid point sits.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub pass: bool,
    pub margin: f64,
    pub worst_x: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConditionReport {
    pub checks: Vec<ConditionCheck>,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const COND_RADIUS_FLOOR: &str = "radius floor: h >= 1";
pub const COND_FLAT_CORE: &str = "flat core: f = 1 on [-1,1]";
pub const COND_STRICT_CONVEX: &str = "strict convexity: f'' > 0 for |x| > 1";
pub const COND_DELTA_FLOOR: &str = "delta floor: f'' >= delta for |x| >= 2";
pub const COND_SWING_CONVEX: &str = "swing convexity: f_t'' >= 0";
pub const COND_SWING_MINIMUM: &str = "swing minimum: unique at sin(1/t)";
pub const COND_SWING_OUTSIDE: &str = "swing support: f_t = f outside [-4,4]";

/// `e^(-1/u)` underflows below this distance from the flat core; strict
/// positivity of `f''` is not representable there.
const UNDERFLOW_BAND: f64 = 1.0 / 700.0;

/// Slack for `f_t'' >= 0`: the threshold is certified, rounding is not.
const CONVEXITY_SLACK: f64 = 1e-12;

/// Checks the profile conditions on the grid `-10, -10 + step, ..., 10`.
///
/// Swing members with `t > 0` are checked against the conditions on `f_t`;
/// every other profile against the conditions on `f`.
pub fn verify_profile_conditions<P: Profile + ?Sized>(
    p: &P,
    grid_step: f64,
) -> Result<ConditionReport> {
    if !(grid_step > 0.0) {
        return Err(NeckError::InvalidParameter {
            name: "grid_step",
            value: grid_step,
            reason: "must be positive",
        });
    }
    let n = math::ceil(20.0 / grid_step) as usize;
    let grid: Vec<f64> = (0..=n)
        .map(|i| (-10.0 + i as f64 * grid_step).min(10.0))
        .collect();
    let jets: Vec<Jet> = grid.iter().map(|&x| p.jet(x)).collect();
    let mut report = ConditionReport::default();

    let (margin, worst_x) = worst(&grid, &jets, |_, j| Some(j.excess));
    report.checks.push(ConditionCheck {
        name: COND_RADIUS_FLOOR,
        pass: margin >= 0.0,
        margin,
        worst_x,
    });

    match p.kind() {
        ProfileKind::Swing { t } if t > 0.0 => {
            let center = math::sin(1.0 / t);
            let (margin, worst_x) = worst(&grid, &jets, |_, j| Some(j.d2));
            report.checks.push(ConditionCheck {
                name: COND_SWING_CONVEX,
                pass: margin >= -CONVEXITY_SLACK,
                margin,
                worst_x,
            });

            let at_center = p.excess(center);
            let (margin, worst_x) = worst(&grid, &jets, |x, j| {
                ((x - center).abs() >= grid_step).then_some(j.excess - at_center)
            });
            report.checks.push(ConditionCheck {
                name: COND_SWING_MINIMUM,
                pass: at_center == 0.0 && margin > 0.0,
                margin,
                worst_x,
            });

            // Outside the bump support a swing member must equal its base.
            let base = p.delta().map(NeckProfile::base).transpose()?;
            let (margin, worst_x) = worst(&grid, &jets, |x, j| {
                let reference = base.as_ref().map_or(j.h, |b| b.eval(x));
                (x.abs() >= Bump::OUTER_CUTOFF).then(|| -(j.h - reference).abs())
            });
            report.checks.push(ConditionCheck {
                name: COND_SWING_OUTSIDE,
                pass: margin == 0.0,
                margin,
                worst_x,
            });
        }
        _ => {
            let (margin, worst_x) = worst(&grid, &jets, |x, j| {
                (x.abs() <= 1.0).then(|| -j.excess.abs().max(j.d1.abs()).max(j.d2.abs()))
            });
            report.checks.push(ConditionCheck {
                name: COND_FLAT_CORE,
                pass: margin == 0.0,
                margin,
                worst_x,
            });

            let (margin, worst_x) = worst(&grid, &jets, |x, j| {
                (x.abs() > 1.0 + UNDERFLOW_BAND).then_some(j.d2)
            });
            let (band_margin, band_x) = worst(&grid, &jets, |x, j| {
                (x.abs() > 1.0 && x.abs() <= 1.0 + UNDERFLOW_BAND).then_some(j.d2)
            });
            let pass = margin > 0.0 && band_margin >= 0.0;
            let (margin, worst_x) = if band_margin < 0.0 && band_margin < margin {
                (band_margin, band_x)
            } else {
                (margin, worst_x)
            };
            report.checks.push(ConditionCheck {
                name: COND_STRICT_CONVEX,
                pass,
                margin,
                worst_x,
            });

            let floor = p.delta().unwrap_or(0.0);
            let (margin, worst_x) = worst(&grid, &jets, |x, j| {
                (x.abs() >= 2.0).then_some(j.d2 - floor)
            });
            report.checks.push(ConditionCheck {
                name: COND_DELTA_FLOOR,
                pass: if p.delta().is_some() {
                    margin >= 0.0
                } else {
                    margin > 0.0
                },
                margin,
                worst_x,
            });
        }
    }
    Ok(report)
}

fn worst(
    grid: &[f64],
    jets: &[Jet],
    mut margin_at: impl FnMut(f64, &Jet) -> Option<f64>,
) -> (f64, f64) {
    let mut best = (f64::INFINITY, f64::NAN);
    for (&x, j) in grid.iter().zip(jets) {
        if let Some(m) = margin_at(x, j) {
            if m < best.0 {
                best = (m + 0.0, x);
            }
        }
    }
    best
}
