//! Rayon versions of the embarrassingly parallel scans. Results come back in
//! the same order as the serial versions, so output files do not depend on
//! the thread count.

use rayon::prelude::*;

use neck_core::geodesic::{
    assemble_convergence, convergence_entry, integrate_geodesic, ConvergenceReport, GeodesicState,
};
use neck_core::moduli::{check_t_range, sweep_row, SweepOptions, SweepResult};
use neck_core::profiles::NeckProfile;
use neck_core::Result;

pub fn par_sweep(base: &NeckProfile, t_grid: &[f64], opts: &SweepOptions) -> Result<SweepResult> {
    let t_max = base.bump().t_max(base.delta_value());
    let mut ts = t_grid.to_vec();
    for &t in &ts {
        check_t_range(t, t_max)?;
    }
    ts.sort_by(f64::total_cmp);
    let rows = ts
        .par_iter()
        .map(|&t| sweep_row(base, t, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

pub fn par_family_convergence(
    base: &NeckProfile,
    t_seq: &[f64],
    t_limit: f64,
    st0: GeodesicState,
    horizon: f64,
    step: f64,
) -> Result<ConvergenceReport> {
    let limit = integrate_geodesic(&base.with_swing(t_limit)?, st0, horizon, step)?;
    let entries = t_seq
        .par_iter()
        .map(|&t| convergence_entry(base, &limit, t, st0, horizon, step))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_convergence(t_limit, &limit, entries))
}
