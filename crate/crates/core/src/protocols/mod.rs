//! End-to-end experiments built on the dynamics layer.

mod result;
mod sampling;
mod search;
mod transport;

pub use result::{csv_float, find_peak, Peak, RunParams, RunResult, TracePoint};
pub use sampling::{
    measure, measure_with, readout, repeated_short_runs, success_probability, tune_short_runs,
    ShortRunReport, ShortRunTuning,
};
pub use search::{
    adiabatic_search, auto_gamma_grid, auto_horizon, gap_scaling, hybrid_search, optimal_gamma,
    qw_search, refine_gamma_grid, search_run, search_scaling, tune_gamma, GammaTuning,
    GapScalingRow, ScalingReport, ScalingRow, SearchSpace, GROUND_TRACE_LIMIT,
};
pub use transport::{glued_trees_trajectory, glued_trees_transport};
