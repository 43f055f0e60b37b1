//! Geodesics of `M_h`: the second-order geodesic ODE, fixed-step classical
//! RK4 integration, and the conservation certificate.
//!
//! Rotational symmetry makes the Clairaut quantity `G θ' = h^2 θ'` a first
//! integral, and the speed `E x'^2 + G θ'^2` is conserved along any geodesic.
//! A trajectory is certified when both drift by at most `1e-8` per unit of
//! integrated length.

use alloc::vec::Vec;

use crate::error::{NeckError, Result};
use crate::math;
use crate::profiles::{NeckProfile, Profile};
use crate::surface::{christoffel_from, metric_at};

/// Phase-space point; `theta` is unwrapped (not reduced mod 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicState {
    pub x: f64,
    pub theta: f64,
    pub vx: f64,
    pub vtheta: f64,
}

impl GeodesicState {
    pub fn new(x: f64, theta: f64, vx: f64, vtheta: f64) -> Self {
        GeodesicState {
            x,
            theta,
            vx,
            vtheta,
        }
    }

    pub fn speed<P: Profile + ?Sized>(&self, p: &P) -> f64 {
        math::sqrt(metric_at(p, self.x).norm_sq(self.vx, self.vtheta))
    }

    pub fn clairaut<P: Profile + ?Sized>(&self, p: &P) -> f64 {
        metric_at(p, self.x).g * self.vtheta
    }

    /// Same direction, unit speed.
    pub fn normalized<P: Profile + ?Sized>(&self, p: &P) -> Result<Self> {
        let speed = self.speed(p);
        if !(speed > 0.0 && speed.is_finite()) {
            return Err(NeckError::InvalidParameter {
                name: "initial speed",
                value: speed,
                reason: "initial velocity must be nonzero and finite",
            });
        }
        Ok(GeodesicState {
            vx: self.vx / speed,
            vtheta: self.vtheta / speed,
            ..*self
        })
    }

    /// `theta` reduced to `[0, 2π)`.
    pub fn theta_mod(&self) -> f64 {
        let tau = core::f64::consts::TAU;
        let r = self.theta - tau * math::floor(self.theta / tau);
        if r >= tau {
            0.0
        } else {
            r
        }
    }

    fn axpy(&self, h: f64, d: &StateDerivative) -> Self {
        GeodesicState {
            x: self.x + h * d.dx,
            theta: self.theta + h * d.dtheta,
            vx: self.vx + h * d.dvx,
            vtheta: self.vtheta + h * d.dvtheta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub dx: f64,
    pub dtheta: f64,
    pub dvx: f64,
    pub dvtheta: f64,
}

/// Right-hand side of the geodesic equation as a first-order system.
pub fn geodesic_rhs<P: Profile + ?Sized>(p: &P, st: &GeodesicState) -> StateDerivative {
    let j = p.jet(st.x);
    let c = christoffel_from(j.h, j.d1, j.d2);
    let (ax, at) = c.contract(st.vx, st.vtheta);
    StateDerivative {
        dx: st.vx,
        dtheta: st.vtheta,
        dvx: -ax,
        dvtheta: -at,
    }
}

fn rk4_step<P: Profile + ?Sized>(p: &P, st: &GeodesicState, h: f64) -> GeodesicState {
    let k1 = geodesic_rhs(p, st);
    let k2 = geodesic_rhs(p, &st.axpy(0.5 * h, &k1));
    let k3 = geodesic_rhs(p, &st.axpy(0.5 * h, &k2));
    let k4 = geodesic_rhs(p, &st.axpy(h, &k3));
    GeodesicState {
        x: st.x + h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
        theta: st.theta + h / 6.0 * (k1.dtheta + 2.0 * k2.dtheta + 2.0 * k3.dtheta + k4.dtheta),
        vx: st.vx + h / 6.0 * (k1.dvx + 2.0 * k2.dvx + 2.0 * k3.dvx + k4.dvx),
        vtheta: st.vtheta
            + h / 6.0 * (k1.dvtheta + 2.0 * k2.dvtheta + 2.0 * k3.dvtheta + k4.dvtheta),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub s: f64,
    pub state: GeodesicState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    /// Clairaut constant `G θ'` at the start.
    pub clairaut: f64,
    pub speed0: f64,
    pub length: f64,
    /// Per-sample `|G θ' - clairaut|`.
    pub clairaut_drift: Vec<f64>,
    /// Per-sample `|speed - speed0|`.
    pub speed_drift: Vec<f64>,
    pub max_clairaut_drift: f64,
    pub max_speed_drift: f64,
    /// Drift tolerance that was applied (absolute, over the whole length).
    pub tolerance: f64,
    pub certified: bool,
}

impl Trajectory {
    pub fn last(&self) -> &GeodesicState {
        &self.samples[self.samples.len() - 1].state
    }

    /// Larger of the two conservation drifts.
    pub fn max_drift(&self) -> f64 {
        self.max_clairaut_drift.max(self.max_speed_drift)
    }

    /// Turns a failed certificate into an error.
    pub fn certify(self) -> Result<Self> {
        if self.certified {
            Ok(self)
        } else {
            Err(NeckError::NotCertified {
                clairaut_drift: self.max_clairaut_drift,
                speed_drift: self.max_speed_drift,
                tolerance: self.tolerance,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions {
    /// Rescale the initial velocity to unit speed.
    pub normalize: bool,
    /// Allowed conservation drift per unit length.
    pub drift_per_length: f64,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        IntegrationOptions {
            normalize: true,
            drift_per_length: 1e-8,
        }
    }
}

/// Integrates over `[0, length]` with unit-speed normalization and the
/// default certificate.
pub fn integrate_geodesic<P: Profile + ?Sized>(
    p: &P,
    st0: GeodesicState,
    length: f64,
    step: f64,
) -> Result<Trajectory> {
    integrate_geodesic_with(p, st0, length, step, IntegrationOptions::default())
}

/// Fixed-step RK4. The step is shrunk to `length / ceil(length / step)` so
/// the last sample lands on `length` exactly.
pub fn integrate_geodesic_with<P: Profile + ?Sized>(
    p: &P,
    st0: GeodesicState,
    length: f64,
    step: f64,
    opts: IntegrationOptions,
) -> Result<Trajectory> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(NeckError::InvalidParameter {
            name: "length",
            value: length,
            reason: "must be positive and finite",
        });
    }
    if !(step > 0.0 && step <= length) {
        return Err(NeckError::InvalidParameter {
            name: "step",
            value: step,
            reason: "must be positive and no larger than the length",
        });
    }
    let st0 = if opts.normalize {
        st0.normalized(p)?
    } else {
        st0
    };
    let n = math::ceil(length / step - 1e-9) as usize;
    let h = length / n as f64;

    let clairaut = st0.clairaut(p);
    let speed0 = st0.speed(p);
    if !(speed0 > 0.0) {
        return Err(NeckError::InvalidParameter {
            name: "initial speed",
            value: speed0,
            reason: "initial velocity must be nonzero",
        });
    }
    let mut samples = Vec::with_capacity(n + 1);
    let mut clairaut_drift = Vec::with_capacity(n + 1);
    let mut speed_drift = Vec::with_capacity(n + 1);
    samples.push(TrajectorySample { s: 0.0, state: st0 });
    clairaut_drift.push(0.0);
    speed_drift.push(0.0);
    let (mut max_c, mut max_s) = (0.0f64, 0.0f64);
    let mut st = st0;
    for i in 1..=n {
        st = rk4_step(p, &st, h);
        let m = metric_at(p, st.x);
        let dc = (m.g * st.vtheta - clairaut).abs();
        let ds = (math::sqrt(m.norm_sq(st.vx, st.vtheta)) - speed0).abs();
        max_c = max_c.max(dc);
        max_s = max_s.max(ds);
        samples.push(TrajectorySample {
            s: i as f64 * h,
            state: st,
        });
        clairaut_drift.push(dc);
        speed_drift.push(ds);
    }
    let tolerance = opts.drift_per_length * length.max(1.0);
    let certified =
        max_c.is_finite() && max_s.is_finite() && max_c <= tolerance && max_s <= tolerance;
    Ok(Trajectory {
        samples,
        clairaut,
        speed0,
        length,
        clairaut_drift,
        speed_drift,
        max_clairaut_drift: max_c,
        max_speed_drift: max_s,
        tolerance,
        certified,
    })
}

/// Sup distances between two trajectories sampled on the same grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupDistance {
    /// `sup max(|Δx|, |Δθ|)`
    pub c0: f64,
    /// `sup max(|Δx'|, |Δθ'|)`
    pub c1: f64,
}

pub fn sup_distance(a: &Trajectory, b: &Trajectory) -> SupDistance {
    let mut d = SupDistance { c0: 0.0, c1: 0.0 };
    for (sa, sb) in a.samples.iter().zip(&b.samples) {
        let (u, v) = (&sa.state, &sb.state);
        d.c0 = d.c0.max((u.x - v.x).abs()).max((u.theta - v.theta).abs());
        d.c1 =
            d.c1.max((u.vx - v.vx).abs())
                .max((u.vtheta - v.vtheta).abs());
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceEntry {
    pub t: f64,
    pub distance: SupDistance,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub t_limit: f64,
    pub entries: Vec<ConvergenceEntry>,
    /// False if any trajectory, including the limit one, failed its certificate.
    pub all_certified: bool,
}

impl ConvergenceReport {
    pub fn c0_norms(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.distance.c0)
    }

    pub fn c1_norms(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.distance.c1)
    }
}

/// Integrates one initial condition under `f_t` for every `t` in `t_seq` and
/// under `f_{t_limit}`, and reports the sup distances to the limit trajectory.
pub fn geodesic_family_convergence(
    base: &NeckProfile,
    t_seq: &[f64],
    t_limit: f64,
    st0: GeodesicState,
    horizon: f64,
    step: f64,
) -> Result<ConvergenceReport> {
    let limit = integrate_geodesic(&base.with_swing(t_limit)?, st0, horizon, step)?;
    let entries = t_seq
        .iter()
        .map(|&t| convergence_entry(base, &limit, t, st0, horizon, step))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_convergence(t_limit, &limit, entries))
}

/// One member of a family-convergence run, against a precomputed limit.
pub fn convergence_entry(
    base: &NeckProfile,
    limit: &Trajectory,
    t: f64,
    st0: GeodesicState,
    horizon: f64,
    step: f64,
) -> Result<ConvergenceEntry> {
    let traj = integrate_geodesic(&base.with_swing(t)?, st0, horizon, step)?;
    Ok(ConvergenceEntry {
        t,
        distance: sup_distance(&traj, limit),
        certified: traj.certified,
    })
}

pub fn assemble_convergence(
    t_limit: f64,
    limit: &Trajectory,
    entries: Vec<ConvergenceEntry>,
) -> ConvergenceReport {
    let all_certified = limit.certified && entries.iter().all(|e| e.certified);
    ConvergenceReport {
        t_limit,
        entries,
        all_certified,
    }
}

/// Largest first and second derivatives seen along a set of trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DerivativeBounds {
    pub vx: f64,
    pub vtheta: f64,
    pub ax: f64,
    pub atheta: f64,
    pub samples: usize,
}

impl DerivativeBounds {
    pub fn max(&self) -> f64 {
        self.vx.max(self.vtheta).max(self.ax).max(self.atheta)
    }
}

/// Sup of `|x'|, |θ'|, |x''|, |θ''|` over unit-speed geodesics of every
/// `f_t`, `t ∈ t_grid`, from every start, counting only samples with
/// `|x| <= window`.
pub fn derivative_bounds(
    base: &NeckProfile,
    t_grid: &[f64],
    starts: &[GeodesicState],
    length: f64,
    step: f64,
    window: f64,
) -> Result<DerivativeBounds> {
    let mut b = DerivativeBounds::default();
    for &t in t_grid {
        let p = base.with_swing(t)?;
        for st0 in starts {
            let traj = integrate_geodesic(&p, *st0, length, step)?;
            for s in traj.samples.iter().filter(|s| s.state.x.abs() <= window) {
                let d = geodesic_rhs(&p, &s.state);
                b.vx = b.vx.max(d.dx.abs());
                b.vtheta = b.vtheta.max(d.dtheta.abs());
                b.ax = b.ax.max(d.dvx.abs());
                b.atheta = b.atheta.max(d.dvtheta.abs());
                b.samples += 1;
            }
        }
    }
    Ok(b)
}
