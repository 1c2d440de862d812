//! Numerical cross-checks of the Newton polygon predictions: critical
//! values, monodromy of the projection to `z`, the resulting genus and
//! number of ends, and periods of the time form.

mod cr;
mod critical;
pub(crate) mod curve;
mod monodromy;
mod periods;
mod topology;

pub use cr::{cauchy_riemann_check, cauchy_riemann_refined, CrReport};
pub use critical::{critical_values, VALUE_TOL};
pub use curve::{Curve, Piece, SpecialPoint, MAX_W_DEGREE};
pub use monodromy::{
    compose, cycle_type, inverse, monodromy, plan_monodromy, LoopMonodromy, MonodromyData, MonodromyPlan, Perm,
};
pub use periods::{
    cycle_period, hyperelliptic_period, periods, plan_periods, CycleLabel, Cycles, ExplicitCycle, PeriodPlan,
    PeriodSample, COLLISION_TOL,
};
pub use topology::{invariants_from, topological_invariants, Topology};
