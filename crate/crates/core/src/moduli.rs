//! Sets of minimal closed geodesics and how they move with the metric.
//!
//! On a surface of revolution the minimal closed geodesics in the core class
//! are the circles `{x} × S^1` at the global minima of `h`. For the flat base
//! profile they fill the band `[-1, 1]` (an interval, the one-dimensional
//! moduli disc); for every swing member with `t > 0` they collapse to the
//! single circle at `sin(1/t)`.
//!
//! Radii are compared in excess space (`h - 1`), with a tie tolerance relative
//! to the minimum excess: the swing perturbation `e^(-1/t)` can be hundreds of
//! orders of magnitude below any absolute tolerance.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::error::{NeckError, Result};
use crate::math;
use crate::profiles::{NeckProfile, Profile};
use crate::shorten::{init_loop, shorten_to_geodesic, LoopInit};
use crate::surface::gauss_curvature;

/// Half-width of the window scanned for minimizers.
pub const SCAN_WINDOW: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizerOptions {
    pub grid_step: f64,
    /// Relative tie tolerance on the excess: `e(x) - e_min <= tol · e_min`.
    pub tol: f64,
    /// Bound on `|h'|` at a minimizer.
    pub slope_tol: f64,
}

impl Default for MinimizerOptions {
    fn default() -> Self {
        MinimizerOptions {
            grid_step: 1e-3,
            tol: 1e-8,
            slope_tol: 1e-6,
        }
    }
}

/// Minimal closed geodesics of one metric.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuliSlice {
    /// Swing parameter, `None` for custom profiles.
    pub t: Option<f64>,
    /// `2π min h`
    pub length_min: f64,
    /// `x` positions of the minimal circles.
    pub minimizers: Vec<f64>,
    /// Representative minimizer: the refined argmin, or the band center.
    pub x_star: f64,
    pub is_interval: bool,
    pub band: (f64, f64),
    /// Connected components of the tie set on the grid.
    pub components: usize,
}

impl ModuliSlice {
    pub fn band_width(&self) -> f64 {
        self.band.1 - self.band.0
    }

    /// Distance from `x` to the band.
    pub fn distance_to_band(&self, x: f64) -> f64 {
        if x < self.band.0 {
            self.band.0 - x
        } else if x > self.band.1 {
            x - self.band.1
        } else {
            0.0
        }
    }
}

pub fn minimizer_set<P: Profile + ?Sized>(p: &P, grid_step: f64, tol: f64) -> Result<ModuliSlice> {
    minimizer_set_with(
        p,
        MinimizerOptions {
            grid_step,
            tol,
            ..MinimizerOptions::default()
        },
    )
}

/// Scans `[-6, 6]` for the circles of least length.
pub fn minimizer_set_with<P: Profile + ?Sized>(
    p: &P,
    opts: MinimizerOptions,
) -> Result<ModuliSlice> {
    if !(opts.grid_step > 0.0) {
        return Err(NeckError::InvalidParameter {
            name: "grid_step",
            value: opts.grid_step,
            reason: "must be positive",
        });
    }
    if !(opts.tol > 0.0) {
        return Err(NeckError::InvalidParameter {
            name: "tol",
            value: opts.tol,
            reason: "must be positive",
        });
    }
    let n = libm::round(2.0 * SCAN_WINDOW / opts.grid_step) as usize;
    let xs: Vec<f64> = (0..=n)
        .map(|i| -SCAN_WINDOW + i as f64 * opts.grid_step)
        .collect();
    let es: Vec<f64> = xs.iter().map(|&x| p.excess(x)).collect();
    let (j_min, e_min) = es
        .iter()
        .copied()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |acc, (j, e)| if e < acc.1 { (j, e) } else { acc },
        );
    if !e_min.is_finite() {
        return Err(NeckError::NoMinimizers);
    }
    let cutoff = e_min + opts.tol * e_min.abs();
    let ties: Vec<usize> = (0..=n).filter(|&j| es[j] <= cutoff).collect();
    let components = 1 + ties.windows(2).filter(|w| w[1] != w[0] + 1).count();

    let is_interval = components == 1 && ties.len() >= 3;
    let (x_star, e_star) = if is_interval {
        let mid = 0.5 * (xs[ties[0]] + xs[ties[ties.len() - 1]]);
        (mid, p.excess(mid))
    } else {
        let lo = xs[j_min.saturating_sub(1)];
        let hi = xs[(j_min + 1).min(n)];
        let refined = math::golden_section(|x| p.excess(x), lo, hi, 1e-13);
        if refined.value <= e_min {
            (refined.x, refined.value)
        } else {
            (xs[j_min], e_min)
        }
    };
    if p.d1(x_star).abs() > opts.slope_tol {
        return Err(NeckError::NoMinimizers);
    }
    let minimizers: Vec<f64> = if is_interval {
        ties.iter()
            .map(|&j| xs[j])
            .filter(|&x| p.d1(x).abs() <= opts.slope_tol)
            .collect()
    } else {
        alloc::vec![x_star]
    };
    if minimizers.is_empty() {
        return Err(NeckError::NoMinimizers);
    }
    let band = minimizers
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    Ok(ModuliSlice {
        t: p.kind().parameter(),
        length_min: TAU + TAU * e_min.min(e_star),
        minimizers,
        x_star,
        is_interval,
        band,
        components,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatRibbonReport {
    pub max_abs_curvature: f64,
    pub worst_x: f64,
    pub pass: bool,
}

/// Checks that the strip swept by the minimal circles is flat:
/// `max |K| <= tol` on the band, sampled at spacing `1e-3` plus both ends.
/// A single circle bounds no ribbon and passes.
pub fn flat_ribbon_check<P: Profile + ?Sized>(
    p: &P,
    band: (f64, f64),
    tol: f64,
) -> FlatRibbonReport {
    let (a, b) = band;
    if b <= a {
        return FlatRibbonReport {
            max_abs_curvature: 0.0,
            worst_x: a,
            pass: true,
        };
    }
    let n = (math::ceil((b - a) / 1e-3) as usize).max(1);
    let mut report = FlatRibbonReport {
        max_abs_curvature: 0.0,
        worst_x: a,
        pass: true,
    };
    for i in 0..=n {
        let x = if i == n {
            b
        } else {
            a + (b - a) * i as f64 / n as f64
        };
        let k = gauss_curvature(p, x).abs();
        if k > report.max_abs_curvature {
            report.max_abs_curvature = k;
            report.worst_x = x;
        }
    }
    report.pass = report.max_abs_curvature <= tol;
    report
}

/// Shortening run used to cross-check a sweep row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheckOptions {
    pub init: LoopInit,
    pub n: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for CrossCheckOptions {
    fn default() -> Self {
        CrossCheckOptions {
            init: LoopInit::Graph {
                amplitude: 2.0,
                phase: 0.0,
            },
            n: 64,
            tol: 1e-8,
            max_iter: 50_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheck {
    pub length: f64,
    pub circle_x: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepOptions {
    pub minimizer: MinimizerOptions,
    pub cross_check: Option<CrossCheckOptions>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub length_min: f64,
    pub x_star: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    pub is_interval: bool,
    pub cross_check: Option<CrossCheck>,
}

impl SweepRow {
    pub fn band_width(&self) -> f64 {
        self.band_hi - self.band_lo
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

/// `samples` evenly spaced values from `tmin` to `tmax` inclusive, with an
/// optional leading `0`.
pub fn linear_t_grid(tmin: f64, tmax: f64, samples: usize, include_zero: bool) -> Vec<f64> {
    let mut grid = Vec::with_capacity(samples + 1);
    if include_zero {
        grid.push(0.0);
    }
    match samples {
        0 => {}
        1 => grid.push(tmin),
        _ => grid
            .extend((0..samples).map(|i| tmin + (tmax - tmin) * i as f64 / (samples - 1) as f64)),
    }
    grid
}

/// `t_k = 1 / (kπ + π/2)`: the parameters where `sin(1/t) = (-1)^k`.
pub fn extremal_t(k: u32) -> f64 {
    1.0 / (k as f64 * core::f64::consts::PI + core::f64::consts::FRAC_PI_2)
}

/// Validates a swing parameter against `[0, t_max]`.
pub fn check_t_range(t: f64, t_max: f64) -> Result<()> {
    if !(0.0..=t_max).contains(&t) {
        return Err(NeckError::InvalidParameter {
            name: "t",
            value: t,
            reason: "outside [0, t_max]",
        });
    }
    Ok(())
}

/// One sweep row: the minimizer set of `f_t` and, if requested, a shortening
/// cross-check of its length.
pub fn sweep_row(base: &NeckProfile, t: f64, opts: &SweepOptions) -> Result<SweepRow> {
    let p = base.with_swing(t)?;
    let slice = minimizer_set_with(&p, opts.minimizer)?;
    let cross_check = match opts.cross_check {
        Some(cc) => {
            let start = init_loop(cc.init, cc.n)?;
            let g = shorten_to_geodesic(&p, &start, cc.tol, cc.max_iter)?;
            Some(CrossCheck {
                length: g.length,
                circle_x: g.circle_x,
            })
        }
        None => None,
    };
    Ok(SweepRow {
        t,
        length_min: slice.length_min,
        x_star: slice.x_star,
        band_lo: slice.band.0,
        band_hi: slice.band.1,
        is_interval: slice.is_interval,
        cross_check,
    })
}

/// Rows ordered by `t`, one per entry of `t_grid`.
pub fn sweep(base: &NeckProfile, t_grid: &[f64], opts: &SweepOptions) -> Result<SweepResult> {
    let t_max = base.bump().t_max(base.delta_value());
    let mut ts = t_grid.to_vec();
    for &t in &ts {
        check_t_range(t, t_max)?;
    }
    ts.sort_by(f64::total_cmp);
    let rows = ts
        .iter()
        .map(|&t| sweep_row(base, t, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct C0Report {
    pub pass: bool,
    /// `1 + eps - max |x|` over every `x_star` and band end; negative on failure.
    pub margin: f64,
    /// Parameters of the rows whose minimizers leave `[-1 - eps, 1 + eps]`.
    pub violations: Vec<f64>,
    pub warning: Option<&'static str>,
    /// `sup |θ'|` over the unit-speed minimal circles, `1 / min h`.
    pub max_theta_rate: f64,
    /// `sup |x'|, |x''|, |θ''|` over the same circles; zero for circles of revolution.
    pub max_other_derivative: f64,
}

/// Checks that every minimal geodesic of the sweep stays in one compact band
/// `[-1 - eps, 1 + eps]`, and reports derivative bounds of those geodesics.
pub fn c0_bound_check(sweep: &SweepResult, eps: f64) -> C0Report {
    if sweep.rows.is_empty() {
        return C0Report {
            pass: true,
            margin: f64::INFINITY,
            violations: Vec::new(),
            warning: Some("empty sweep: bound holds vacuously"),
            max_theta_rate: 0.0,
            max_other_derivative: 0.0,
        };
    }
    let limit = 1.0 + eps;
    let mut margin = f64::INFINITY;
    let mut violations = Vec::new();
    let mut max_theta_rate = 0.0f64;
    for row in &sweep.rows {
        let reach = row
            .x_star
            .abs()
            .max(row.band_lo.abs())
            .max(row.band_hi.abs());
        margin = margin.min(limit - reach);
        if reach > limit {
            violations.push(row.t);
        }
        max_theta_rate = max_theta_rate.max(TAU / row.length_min);
    }
    C0Report {
        pass: violations.is_empty(),
        margin,
        violations,
        warning: None,
        max_theta_rate,
        max_other_derivative: 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityEntry {
    pub dt: f64,
    /// Largest distance from a minimizer of `f_{t+dt}` to the band of `f_t`.
    pub distance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub t: f64,
    pub radius: f64,
    pub entries: Vec<StabilityEntry>,
    /// Largest `|dt|` such that every tested `|dt'| <= |dt|` passes; 0 if none.
    pub threshold: f64,
}

impl StabilityReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

/// For each `dt`, checks that the minimal circles of `f_{t+dt}` lie within
/// `radius` (in `|Δx|`) of the minimal circles of `f_t`.
pub fn neighborhood_stability(
    base: &NeckProfile,
    t: f64,
    dt_seq: &[f64],
    radius: f64,
    opts: MinimizerOptions,
) -> Result<StabilityReport> {
    let t_max = base.bump().t_max(base.delta_value());
    check_t_range(t, t_max)?;
    for &dt in dt_seq {
        check_t_range(t + dt, t_max)?;
    }
    let reference = minimizer_set_with(&base.with_swing(t)?, opts)?;
    let mut entries = Vec::with_capacity(dt_seq.len());
    for &dt in dt_seq {
        let slice = minimizer_set_with(&base.with_swing(t + dt)?, opts)?;
        let distance = slice
            .minimizers
            .iter()
            .map(|&x| reference.distance_to_band(x))
            .fold(0.0f64, f64::max);
        entries.push(StabilityEntry {
            dt,
            distance,
            pass: distance <= radius,
        });
    }
    let mut by_size: Vec<&StabilityEntry> = entries.iter().collect();
    by_size.sort_by(|a, b| a.dt.abs().total_cmp(&b.dt.abs()));
    let mut threshold = 0.0;
    for e in by_size {
        if !e.pass {
            break;
        }
        threshold = e.dt.abs();
    }
    Ok(StabilityReport {
        t,
        radius,
        entries,
        threshold,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EscapeBound {
    /// Smallest grid `X >= 2` with `2π h(±X) > 1 + minimal length`.
    pub x: f64,
    /// `2π min(h(X), h(-X))`
    pub bound: f64,
    pub minimal_length: f64,
}

/// Searches `X = 2, 2.001, ...` for the escape radius: any loop in the core
/// class lying in `|x| >= X` is longer than `1 + 2π min h`, because its θ
/// projection has degree one and `h` is increasing there.
pub fn escape_bound_search<P: Profile + ?Sized>(p: &P) -> Result<EscapeBound> {
    const STEP: f64 = 1e-3;
    const LIMIT: f64 = 1e3;
    let min = crate::shorten::minimize_radius(p);
    let mut k = 0usize;
    loop {
        let x = 2.0 + k as f64 * STEP;
        if x > LIMIT {
            return Err(NeckError::InvalidParameter {
                name: "profile",
                value: LIMIT,
                reason: "radius does not grow enough for an escape bound",
            });
        }
        let e = p.excess(x).min(p.excess(-x));
        if TAU * (e - min.excess) > 1.0 {
            return Ok(EscapeBound {
                x,
                bound: TAU + TAU * e,
                minimal_length: min.length(),
            });
        }
        k += 1;
    }
}
