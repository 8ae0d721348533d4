//! Quantum states, schedules, time evolution and spectral analysis.

mod evolve;
mod schedule;
mod spectral;
mod spread;
mod state;

pub use evolve::{
    evolve_scheduled, evolve_scheduled_observed, evolve_static, evolve_static_sampled,
    evolve_static_with, rk4_step_size, sample_times, Backend, Trajectory, DEFAULT_SAMPLES,
    NORM_TOLERANCE,
};
pub use schedule::{SCurve, Schedule, ScheduleFamily};
pub use spectral::{
    eigenvalues, gap_at, min_gap, spectrum, Eigensystem, GapPoint, GapScan, DEGENERATE_GAP,
};
pub use spread::{position_spread, spread_of};
pub use state::{basis_state, equal_superposition, QuantumState};
