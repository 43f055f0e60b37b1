//! Discrete closed loops in the core free homotopy class and a Birkhoff-style
//! polygonal curve shortening that drives them to minimal closed geodesics.
//!
//! A [`Loop`] stores `N` chart points `(x_i, θ_i)`; the closing point is
//! implicitly `(x_0, θ_0 + 2π)`, so every loop winds exactly once.
//!
//! Lengths are reported as `2π + excess`, where the excess over the flat unit
//! cylinder is accumulated segment by segment without cancellation. On the
//! swinging neck the minimal circles differ in length by `O(e^(-1/t))`, which
//! is invisible in a plain sum of segment lengths.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{NeckError, Result};
use crate::math;
use crate::profiles::Profile;
use crate::surface::christoffel_at;

pub const MIN_LOOP_POINTS: usize = 16;

/// Half-width of the window searched for circles of revolution.
const SEARCH_WINDOW: f64 = 6.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Loop {
    x: Vec<f64>,
    theta: Vec<f64>,
}

impl Loop {
    /// Loop through the given points, closed by `(x[0], theta[0] + 2π)`.
    pub fn new(x: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        if x.len() != theta.len() {
            return Err(NeckError::DegenerateLoop("x and theta lengths differ"));
        }
        if x.len() < 3 {
            return Err(NeckError::TooFewPoints { n: x.len(), min: 3 });
        }
        if x.iter().chain(&theta).any(|v| !v.is_finite()) {
            return Err(NeckError::DegenerateLoop("non-finite coordinate"));
        }
        Ok(Loop { x, theta })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Point `i` for `-1 <= i <= N`, unwrapped across the seam.
    #[inline]
    fn point(&self, i: isize) -> (f64, f64) {
        let n = self.x.len() as isize;
        if i < 0 {
            let j = (i + n) as usize;
            (self.x[j], self.theta[j] - TAU)
        } else if i >= n {
            let j = (i - n) as usize;
            (self.x[j], self.theta[j] + TAU)
        } else {
            (self.x[i as usize], self.theta[i as usize])
        }
    }

    /// Total θ increment over `2π`, rounded. Always 1 for a loop built here.
    pub fn winding_number(&self) -> i64 {
        let n = self.x.len() as isize;
        let mut total = 0.0;
        for i in 0..n {
            total += self.point(i + 1).1 - self.point(i).1;
        }
        libm::round(total / TAU) as i64
    }

    pub fn x_range(&self) -> (f64, f64) {
        self.x
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn x_spread(&self) -> f64 {
        let (lo, hi) = self.x_range();
        hi - lo
    }

    pub fn mean_x(&self) -> f64 {
        self.x.iter().sum::<f64>() / self.x.len() as f64
    }

    pub fn shifted(&self, dx: f64) -> Loop {
        Loop {
            x: self.x.iter().map(|v| v + dx).collect(),
            theta: self.theta.clone(),
        }
    }

    /// Uniformly parametrized circle of revolution at `x0`.
    pub fn circle(x0: f64, n: usize, theta0: f64) -> Loop {
        Loop {
            x: alloc::vec![x0; n],
            theta: (0..n).map(|i| theta0 + TAU * i as f64 / n as f64).collect(),
        }
    }

    /// Longest Riemannian chord over the mean chord.
    pub fn chord_ratio<P: Profile + ?Sized>(&self, p: &P) -> f64 {
        let n = self.x.len() as isize;
        let chords: Vec<f64> = (0..n)
            .map(|i| segment_length(p, self.point(i), self.point(i + 1)))
            .collect();
        let mean = chords.iter().sum::<f64>() / chords.len() as f64;
        chords.iter().fold(0.0f64, |m, &c| m.max(c)) / mean
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LoopInit {
    Circle {
        x0: f64,
    },
    /// `θ ↦ (amplitude · sin(θ + phase), θ)`
    Graph {
        amplitude: f64,
        phase: f64,
    },
    /// Circle at `x0` with each `x_i` jittered uniformly in `±noise`.
    Perturbed {
        x0: f64,
        noise: f64,
        seed: u64,
    },
}

pub fn init_loop(kind: LoopInit, n: usize) -> Result<Loop> {
    if n < MIN_LOOP_POINTS {
        return Err(NeckError::TooFewPoints {
            n,
            min: MIN_LOOP_POINTS,
        });
    }
    let theta: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
    let x = match kind {
        LoopInit::Circle { x0 } => alloc::vec![x0; n],
        LoopInit::Graph { amplitude, phase } => theta
            .iter()
            .map(|&t| amplitude * math::sin(t + phase))
            .collect(),
        LoopInit::Perturbed { x0, noise, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| x0 + noise * rng.random_range(-1.0..=1.0))
                .collect()
        }
    };
    Loop::new(x, theta)
}

/// Midpoint-rule length of the chart segment `a -> b`.
#[inline]
fn segment_length<P: Profile + ?Sized>(p: &P, a: (f64, f64), b: (f64, f64)) -> f64 {
    let j = p.jet(0.5 * (a.0 + b.0));
    let (dx, dt) = (b.0 - a.0, b.1 - a.1);
    math::sqrt((1.0 + j.d1 * j.d1) * dx * dx + j.h * j.h * dt * dt)
}

/// Segment length minus its θ increment, computed without cancellation.
#[inline]
fn segment_excess<P: Profile + ?Sized>(p: &P, a: (f64, f64), b: (f64, f64)) -> f64 {
    let j = p.jet(0.5 * (a.0 + b.0));
    let (dx, dt) = (b.0 - a.0, b.1 - a.1);
    let e = 1.0 + j.d1 * j.d1;
    let g_minus_one = j.excess * (2.0 + j.excess);
    let seg = math::sqrt(e * dx * dx + (1.0 + g_minus_one) * dt * dt);
    if dt > 0.0 {
        (e * dx * dx + g_minus_one * dt * dt) / (seg + dt)
    } else {
        seg - dt
    }
}

/// Loop length minus the total θ increment `2π`.
pub fn loop_excess_length<P: Profile + ?Sized>(p: &P, lp: &Loop) -> f64 {
    let n = lp.len() as isize;
    (0..n)
        .map(|i| segment_excess(p, lp.point(i), lp.point(i + 1)))
        .sum()
}

/// `Σ sqrt(E(m_i) Δx_i^2 + G(m_i) Δθ_i^2)` with chart midpoints `m_i`.
pub fn loop_length<P: Profile + ?Sized>(p: &P, lp: &Loop) -> f64 {
    TAU + loop_excess_length(p, lp)
}

/// Second-order approximation of the geodesic midpoint of `a` and `b`:
/// the chart midpoint corrected by `Γ(Δ, Δ) / 8`.
pub fn geodesic_midpoint<P: Profile + ?Sized>(p: &P, a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let mx = 0.5 * (a.0 + b.0);
    let mt = 0.5 * (a.1 + b.1);
    let (gx, gt) = christoffel_at(p, mx).contract(b.0 - a.0, b.1 - a.1);
    (mx + 0.125 * gx, mt + 0.125 * gt)
}

/// Largest defect of the discrete geodesic equation `γ'' + Γ(γ', γ') = 0`
/// over the vertices, measured in the metric and using the actual
/// neighbouring chord lengths as the arc parameter.
pub fn loop_residual<P: Profile + ?Sized>(p: &P, lp: &Loop) -> f64 {
    let n = lp.len() as isize;
    let mut worst = 0.0f64;
    for i in 0..n {
        let a = lp.point(i - 1);
        let c = lp.point(i);
        let b = lp.point(i + 1);
        let sm = segment_length(p, a, c);
        let sp = segment_length(p, c, b);
        let span = sm + sp;
        if !(sm > 0.0 && sp > 0.0) {
            return f64::INFINITY;
        }
        let v = ((b.0 - a.0) / span, (b.1 - a.1) / span);
        let acc = (
            2.0 * ((b.0 - c.0) / sp - (c.0 - a.0) / sm) / span,
            2.0 * ((b.1 - c.1) / sp - (c.1 - a.1) / sm) / span,
        );
        let j = p.jet(c.0);
        let (gx, gt) = crate::surface::christoffel_from(j.h, j.d1, j.d2).contract(v.0, v.1);
        let (dx, dt) = (acc.0 + gx, acc.1 + gt);
        let defect = math::sqrt((1.0 + j.d1 * j.d1) * dx * dx + j.h * j.h * dt * dt);
        worst = worst.max(defect);
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResampleStatus {
    Applied,
    /// The resampled polygon was longer; the midpoint pass result was kept.
    Rejected,
    /// Degenerate geometry; the step returned its input unchanged.
    Failed(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub result: Loop,
    pub excess_before: f64,
    pub excess_after: f64,
    pub resample: ResampleStatus,
}

impl StepReport {
    pub fn length_before(&self) -> f64 {
        TAU + self.excess_before
    }

    pub fn length_after(&self) -> f64 {
        TAU + self.excess_after
    }
}

/// One alternating midpoint pass followed by arc-length resampling.
///
/// Even-indexed vertices are moved to the geodesic midpoint of their
/// neighbours, then odd-indexed ones. A move is kept only if it does not
/// lengthen the two segments it touches, and the resampled polygon only if it
/// is no longer than the one it replaces, so the loop length never increases.
pub fn shorten_step<P: Profile + ?Sized>(p: &P, lp: &Loop) -> StepReport {
    let excess_before = loop_excess_length(p, lp);
    let mut cur = lp.clone();
    let n = cur.len() as isize;
    for parity in 0..2 {
        let mut i = parity;
        while i < n {
            let a = cur.point(i - 1);
            let c = cur.point(i);
            let b = cur.point(i + 1);
            let cand = geodesic_midpoint(p, a, b);
            if cand.0.is_finite() && cand.1.is_finite() {
                let old = segment_excess(p, a, c) + segment_excess(p, c, b);
                let new = segment_excess(p, a, cand) + segment_excess(p, cand, b);
                if new < old {
                    cur.x[i as usize] = cand.0;
                    cur.theta[i as usize] = cand.1;
                }
            }
            i += 2;
        }
    }
    let after_pass = loop_excess_length(p, &cur);
    match resample(p, &cur) {
        Ok(res) => {
            let after = loop_excess_length(p, &res);
            if after <= after_pass {
                StepReport {
                    result: res,
                    excess_before,
                    excess_after: after,
                    resample: ResampleStatus::Applied,
                }
            } else {
                StepReport {
                    result: cur,
                    excess_before,
                    excess_after: after_pass,
                    resample: ResampleStatus::Rejected,
                }
            }
        }
        Err(reason) => StepReport {
            result: lp.clone(),
            excess_before,
            excess_after: excess_before,
            resample: ResampleStatus::Failed(reason),
        },
    }
}

/// Redistributes the vertices to equal Riemannian arc length along the
/// polygon, keeping vertex 0 fixed.
fn resample<P: Profile + ?Sized>(p: &P, lp: &Loop) -> core::result::Result<Loop, &'static str> {
    let n = lp.len();
    let seg: Vec<f64> = (0..n as isize)
        .map(|i| segment_length(p, lp.point(i), lp.point(i + 1)))
        .collect();
    if seg.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err("zero-length or non-finite segment");
    }
    let total: f64 = seg.iter().sum();
    let mut x = Vec::with_capacity(n);
    let mut theta = Vec::with_capacity(n);
    x.push(lp.x[0]);
    theta.push(lp.theta[0]);
    let (mut i, mut acc) = (0usize, 0.0);
    for k in 1..n {
        let target = total * k as f64 / n as f64;
        while i < n - 1 && acc + seg[i] < target {
            acc += seg[i];
            i += 1;
        }
        let frac = ((target - acc) / seg[i]).clamp(0.0, 1.0);
        let a = lp.point(i as isize);
        let b = lp.point(i as isize + 1);
        x.push(a.0 + frac * (b.0 - a.0));
        theta.push(a.1 + frac * (b.1 - a.1));
    }
    if theta.windows(2).any(|w| !(w[1] > w[0])) && lp.theta.windows(2).all(|w| w[1] > w[0]) {
        return Err("resampling produced a non-monotone parametrization");
    }
    Ok(Loop { x, theta })
}

/// Length-nonincreasing moves along the family of circles of revolution.
///
/// Birkhoff passes damp the oscillating modes of a loop but move its mean
/// position only at a rate proportional to `h'`, which on the swinging neck
/// is of order `e^(-1/t)`. Two moves cover that direction:
///
/// - rigid translation in `x`, optimized by golden section;
/// - once the loop is nearly a circle (`x`-spread at most `snap_spread`),
///   replacement by the uniformly parametrized circle of least length.
///
/// Returns the best candidate strictly shorter than `lp`.
pub fn recenter<P: Profile + ?Sized>(p: &P, lp: &Loop, snap_spread: f64) -> Option<Loop> {
    let current = loop_excess_length(p, lp);
    let mean = lp.mean_x();
    let window = SEARCH_WINDOW.max(mean.abs() + 1.0);
    let mut best: Option<(f64, Loop)> = None;

    let shift = math::golden_section(
        |d| loop_excess_length(p, &lp.shifted(d)),
        -window - mean,
        window - mean,
        1e-12,
    );
    if shift.value < current {
        best = Some((shift.value, lp.shifted(shift.x)));
    }

    if lp.x_spread() <= snap_spread {
        let (lo, hi) = lp.x_range();
        let x_min = minimize_radius_near(p, lo.min(-window), hi.max(window), lp.mean_x());
        let circle = Loop::circle(x_min, lp.len(), lp.theta[0]);
        let value = loop_excess_length(p, &circle);
        if value < best.as_ref().map_or(current, |b| b.0) {
            best = Some((value, circle));
        }
    }
    best.map(|(_, l)| l)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub length: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedGeodesic {
    pub geodesic: Loop,
    pub length: f64,
    pub residual: f64,
    /// Set when the converged loop is a circle of revolution.
    pub circle_x: Option<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortenOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Allow the circle-family moves of [`recenter`].
    pub recenter: bool,
    /// Iterations between periodic recenter attempts. An attempt is also
    /// made before declaring convergence.
    pub recenter_every: usize,
    /// `x`-spread below which a loop may be snapped to a circle;
    /// defaults to `sqrt(tol)`.
    pub snap_spread: Option<f64>,
}

impl ShortenOptions {
    pub fn new(tol: f64, max_iter: usize) -> Self {
        ShortenOptions {
            tol,
            max_iter,
            recenter: true,
            recenter_every: 256,
            snap_spread: None,
        }
    }
}

pub fn shorten_to_geodesic<P: Profile + ?Sized>(
    p: &P,
    lp: &Loop,
    tol: f64,
    max_iter: usize,
) -> Result<ClosedGeodesic> {
    shorten_to_geodesic_with(p, lp, ShortenOptions::new(tol, max_iter), |_| {})
}

/// Iterates [`shorten_step`] until the relative length decrease of a step
/// falls below `tol` and the discrete geodesic residual is at most `tol`.
/// `observer` sees one row per iteration.
pub fn shorten_to_geodesic_with<P: Profile + ?Sized>(
    p: &P,
    lp: &Loop,
    opts: ShortenOptions,
    mut observer: impl FnMut(&TraceRow),
) -> Result<ClosedGeodesic> {
    if !(opts.tol > 0.0) {
        return Err(NeckError::InvalidParameter {
            name: "tol",
            value: opts.tol,
            reason: "must be positive",
        });
    }
    let snap = opts.snap_spread.unwrap_or_else(|| math::sqrt(opts.tol));
    let mut cur = lp.clone();
    let mut excess = loop_excess_length(p, &cur);
    let mut residual = loop_residual(p, &cur);
    let mut last_attempt = 0usize;

    for iter in 1..=opts.max_iter {
        let step = shorten_step(p, &cur);
        let decrease = excess - step.excess_after;
        cur = step.result;
        excess = step.excess_after;
        residual = loop_residual(p, &cur);
        observer(&TraceRow {
            iter,
            length: TAU + excess,
            residual,
        });
        let stagnant = decrease < opts.tol * (TAU + excess);
        let certified = residual <= opts.tol;
        let due = iter - last_attempt >= opts.recenter_every;
        if opts.recenter && (due || (stagnant && certified)) {
            last_attempt = iter;
            if let Some(better) = recenter(p, &cur, snap) {
                let after = loop_excess_length(p, &better);
                let gain = excess - after;
                cur = better;
                excess = after;
                residual = loop_residual(p, &cur);
                // A final move that gains less than a step would is kept
                // without reopening the iteration.
                let settled = stagnant && certified && gain < opts.tol * (TAU + excess);
                if !(settled && residual <= opts.tol) {
                    continue;
                }
            }
        }
        if stagnant && residual <= opts.tol {
            let circle_x = (cur.x_spread() < opts.tol).then(|| cur.mean_x());
            return Ok(ClosedGeodesic {
                length: TAU + excess,
                residual,
                circle_x,
                iterations: iter,
                geodesic: cur,
            });
        }
    }
    Err(NeckError::NotConverged {
        iterations: opts.max_iter,
        residual,
        last: Box::new(cur),
    })
}

/// Location and value of the global minimum of a profile's radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusMinimum {
    pub x: f64,
    /// `min h - 1`
    pub excess: f64,
}

impl RadiusMinimum {
    pub fn radius(&self) -> f64 {
        1.0 + self.excess
    }

    /// `2π min h`.
    pub fn length(&self) -> f64 {
        TAU + TAU * self.excess
    }
}

/// Grid scan of `[-10, 10]` at spacing `1e-3` followed by golden-section
/// refinement of the best cell. Ties go to the point nearest `0`.
pub fn minimize_radius<P: Profile + ?Sized>(p: &P) -> RadiusMinimum {
    let x = minimize_radius_near(p, -10.0, 10.0, 0.0);
    RadiusMinimum {
        x,
        excess: p.excess(x),
    }
}

/// Grid minimum of the excess on `[lo, hi]`; among equal values the grid
/// point closest to `prefer` wins.
fn minimize_radius_near<P: Profile + ?Sized>(p: &P, lo: f64, hi: f64, prefer: f64) -> f64 {
    const STEP: f64 = 1e-3;
    let n = math::ceil((hi - lo) / STEP) as usize;
    let (mut best_x, mut best) = (lo, p.excess(lo));
    for i in 1..=n {
        let x = (lo + i as f64 * STEP).min(hi);
        let v = p.excess(x);
        if v < best || (v == best && (x - prefer).abs() < (best_x - prefer).abs()) {
            best = v;
            best_x = x;
        }
    }
    let refined = math::golden_section(
        |x| p.excess(x),
        (best_x - STEP).max(lo),
        (best_x + STEP).min(hi),
        1e-13,
    );
    if refined.value < best {
        refined.x
    } else {
        best_x
    }
}

/// `2π min h`: the least length of a loop in the core class.
pub fn minimal_length<P: Profile + ?Sized>(p: &P) -> f64 {
    minimize_radius(p).length()
}

/// Relative deviation of two metrics over `x ∈ [lo, hi]`, sampled at `step`:
/// `sup max(|E_p - E_q| / E_q, |G_p - G_q| / G_q)`.
pub fn metric_deviation<P, Q>(p: &P, q: &Q, lo: f64, hi: f64, step: f64) -> f64
where
    P: Profile + ?Sized,
    Q: Profile + ?Sized,
{
    let n = (math::ceil((hi - lo) / step) as usize).max(1);
    let mut worst = 0.0f64;
    for i in 0..=n {
        let x = (lo + i as f64 * step).min(hi);
        let (a, b) = (p.jet(x), q.jet(x));
        let eb = 1.0 + b.d1 * b.d1;
        let dg = (a.excess - b.excess) * (2.0 + a.excess + b.excess);
        worst = worst
            .max(((a.d1 - b.d1) * (a.d1 + b.d1)).abs() / eb)
            .max(dg.abs() / (b.h * b.h));
    }
    worst
}

/// If the metrics of `p` and `q` differ relatively by at most `δ < 1` on the
/// `x`-band of the loop, then `|len_p - len_q| <= δ / (1 - δ) · len_q`.
///
/// Returns `(δ, bound)` with `δ` sampled on the band at spacing `1e-3`.
pub fn length_perturbation_bound<P, Q>(p: &P, q: &Q, lp: &Loop) -> (f64, f64)
where
    P: Profile + ?Sized,
    Q: Profile + ?Sized,
{
    let (lo, hi) = lp.x_range();
    let dev = metric_deviation(p, q, lo, hi, 1e-3);
    let bound = if dev < 1.0 {
        dev / (1.0 - dev) * loop_length(q, lp)
    } else {
        f64::INFINITY
    };
    (dev, bound)
}
