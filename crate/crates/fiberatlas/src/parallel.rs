//! Thread-pool drivers for the independent work units: monodromy loops and
//! period grid nodes. Results are collected by index, so output does not
//! depend on the worker count.

use fiberatlas_core::grid::Grid;
use fiberatlas_core::newton::BivarPolynomial;
use fiberatlas_core::numerics::{plan_monodromy, plan_periods, Cycles, MonodromyData, PeriodSample};
use fiberatlas_core::{Complex64, Result};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::Failure;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "FIBERATLAS_THREADS";

/// A pool sized by `FIBERATLAS_THREADS` (all cores when unset).
pub fn pool() -> std::result::Result<ThreadPool, Failure> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => n,
            _ => return Err(Failure::Invalid(format!("{THREADS_VAR} must be a positive integer, got '{v}'"))),
        },
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Numerical(format!("cannot start worker threads: {e}")))
}

pub fn monodromy(pool: &ThreadPool, f: &BivarPolynomial, xi: Complex64) -> Result<MonodromyData> {
    let plan = plan_monodromy(f, xi)?;
    let perms = pool.install(|| (0..plan.jobs()).into_par_iter().map(|k| plan.track(k)).collect::<Result<Vec<_>>>())?;
    plan.finish(perms)
}

pub fn periods(pool: &ThreadPool, f: &BivarPolynomial, grid: &Grid, cycles: &Cycles) -> Result<PeriodSample> {
    let plan = plan_periods(f, grid, cycles)?;
    let raw =
        pool.install(|| (0..plan.len()).into_par_iter().map(|k| plan.integrate(k)).collect::<Result<Vec<_>>>())?;
    plan.finish(raw)
}
