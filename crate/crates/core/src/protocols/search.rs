//! Quantum-walk, adiabatic and hybrid search for a marked basis state.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::result::{find_peak, Peak, RunParams, RunResult, TracePoint};
use crate::dynamics::{
    equal_superposition, evolve_scheduled_observed, evolve_static_sampled, min_gap, sample_times,
    spectrum, Backend, QuantumState, Schedule,
};
use crate::error::{check_index, invalid, Result};
use crate::exec::Execution;
use crate::graph::Graph;
use crate::hamiltonian::{
    add, hypercube_qubit_hamiltonian, marked_hamiltonian, walk_hamiltonian, Hamiltonian,
};
use crate::stats::{power_law_fit, LinearFit};
use crate::C64;

/// Instantaneous ground-state overlaps are tracked up to this dimension.
pub const GROUND_TRACE_LIMIT: usize = 256;

/// Where the walker searches: the qubit hypercube or an explicit graph.
#[derive(Clone, Debug, PartialEq)]
pub enum SearchSpace {
    Hypercube { n: usize },
    Graph(Graph),
}

impl SearchSpace {
    pub fn dim(&self) -> usize {
        match self {
            SearchSpace::Hypercube { n } => 1 << n,
            SearchSpace::Graph(g) => g.num_vertices(),
        }
    }

    /// Qubit count (hypercube) or `log2 N` rounded up (graphs).
    pub fn qubits(&self) -> usize {
        match self {
            SearchSpace::Hypercube { n } => *n,
            SearchSpace::Graph(g) => crate::encode::encoding_cost(g.num_vertices() as u64)
                .map(|c| c.binary_bits as usize)
                .unwrap_or(1),
        }
    }

    pub fn walk(&self, gamma: f64) -> Result<Hamiltonian> {
        match self {
            SearchSpace::Hypercube { n } => hypercube_qubit_hamiltonian(*n, gamma),
            SearchSpace::Graph(g) => walk_hamiltonian(g, gamma),
        }
    }

    fn tag(&self) -> String {
        match self {
            SearchSpace::Hypercube { n } => format!("hypercube(n={n})"),
            SearchSpace::Graph(g) => format!("{}({})", g.kind(), g.size_param()),
        }
    }

    fn initial_state(&self) -> Result<QuantumState> {
        match self {
            SearchSpace::Hypercube { n } => equal_superposition(*n),
            SearchSpace::Graph(g) => {
                let a = C64::new((g.num_vertices() as f64).sqrt().recip(), 0.0);
                QuantumState::from_amplitudes(vec![a; g.num_vertices()])
            }
        }
    }
}

/// Horizon `3 * pi * sqrt(N) / 2` used when the run time is "auto".
pub fn auto_horizon(dim: usize) -> f64 {
    3.0 * std::f64::consts::PI * (dim as f64).sqrt() / 2.0
}

/// 25 log-spaced rates spanning `[1e-2, 1e1] / n`.
pub fn auto_gamma_grid(n: usize) -> Vec<f64> {
    let n = n.max(1) as f64;
    (0..25)
        .map(|k| 10f64.powf(-2.0 + 3.0 * k as f64 / 24.0) / n)
        .collect()
}

/// `points` log-spaced rates between the grid neighbours of `grid[best]`.
pub fn refine_gamma_grid(grid: &[f64], best: usize, points: usize) -> Vec<f64> {
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    if points < 2 || lo == hi {
        return vec![grid[best]];
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..points)
        .map(|k| (llo + (lhi - llo) * k as f64 / (points - 1) as f64).exp())
        .collect()
}

/// Walk search: evolve the uniform state under `H_walk(gamma) + (1 - |m><m|)`
/// for `t_final`, recording `|<m|psi(t)>|^2` at `samples` uniform times.
pub fn search_run(
    space: &SearchSpace,
    m: usize,
    gamma: f64,
    t_final: f64,
    samples: usize,
) -> Result<RunResult> {
    let start = Instant::now();
    let dim = space.dim();
    check_index(m, dim)?;
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(invalid(format!(
            "search time must be positive, got {t_final}"
        )));
    }
    let h = add(&space.walk(gamma)?, &marked_hamiltonian(dim, m)?)?;
    let psi0 = space.initial_state()?;
    let times = sample_times(t_final, samples)?;
    let mut trace = Vec::with_capacity(times.len());
    let last = evolve_static_sampled(&h, &psi0, &times, Backend::Auto, |t, psi| {
        let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        trace.push(TracePoint {
            t,
            success_probability: psi[m].norm_sqr(),
            norm,
        });
    })?;
    let peak = find_peak(
        &trace
            .iter()
            .map(|p| (p.t, p.success_probability))
            .collect::<Vec<_>>(),
    );
    Ok(RunResult {
        params: RunParams {
            n: space.qubits(),
            dim,
            marked: Some(m),
            instance: Some(space.tag()),
            gamma,
            t_final,
            schedule: "qw_constant".into(),
            schedule_family: None,
            seed: None,
        },
        trace,
        final_fidelity: last.probability(m)?,
        peak,
        ground_fidelity: None,
        samples: None,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Hypercube walk search with the default 256-sample trace.
pub fn qw_search(n: usize, m: usize, gamma: f64, t_final: f64) -> Result<RunResult> {
    search_run(
        &SearchSpace::Hypercube { n },
        m,
        gamma,
        t_final,
        crate::dynamics::DEFAULT_SAMPLES,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaTuning {
    pub gamma: f64,
    pub peak_probability: f64,
    pub t_peak: f64,
    /// `(gamma, peak probability, peak time)` for every candidate.
    pub sweep: Vec<(f64, f64, f64)>,
}

/// Runs the search for each candidate rate to `horizon` and keeps the rate
/// with the highest peak success probability (ties go to the smaller rate).
pub fn optimal_gamma(
    space: &SearchSpace,
    m: usize,
    grid: &[f64],
    horizon: f64,
    samples: usize,
    exec: Execution,
) -> Result<GammaTuning> {
    if grid.is_empty() {
        return Err(invalid("gamma grid is empty"));
    }
    let peaks: Vec<Peak> = exec.try_map(grid.len(), |k| {
        search_run(space, m, grid[k], horizon, samples).map(|r| r.peak)
    })?;
    let sweep: Vec<(f64, f64, f64)> = grid
        .iter()
        .zip(&peaks)
        .map(|(&g, p)| (g, p.probability, p.t))
        .collect();
    let best = sweep
        .iter()
        .copied()
        .reduce(|a, b| {
            if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            }
        })
        .unwrap();
    Ok(GammaTuning {
        gamma: best.0,
        peak_probability: best.1,
        t_peak: best.2,
        sweep,
    })
}

/// [`auto_gamma_grid`] sweep followed by one refinement sweep between the
/// neighbours of the coarse optimum.
pub fn tune_gamma(
    space: &SearchSpace,
    m: usize,
    horizon: f64,
    samples: usize,
    exec: Execution,
) -> Result<GammaTuning> {
    let grid = auto_gamma_grid(space.qubits());
    let coarse = optimal_gamma(space, m, &grid, horizon, samples, exec)?;
    let best = grid.iter().position(|&g| g == coarse.gamma).unwrap();
    let fine = refine_gamma_grid(&grid, best, 25);
    let refined = optimal_gamma(space, m, &fine, horizon, samples, exec)?;
    let mut sweep = coarse.sweep.clone();
    sweep.extend(refined.sweep.iter().copied());
    let winner = if refined.peak_probability >= coarse.peak_probability {
        refined
    } else {
        coarse
    };
    Ok(GammaTuning { sweep, ..winner })
}

fn scheduled_search(
    n: usize,
    m: usize,
    gamma: f64,
    sched: &Schedule,
    samples: usize,
) -> Result<RunResult> {
    let start = Instant::now();
    let hw = hypercube_qubit_hamiltonian(n, gamma)?;
    let dim = hw.dim();
    check_index(m, dim)?;
    let hp = marked_hamiltonian(dim, m)?;
    let psi0 = equal_superposition(n)?;
    let times = sample_times(sched.t_final(), samples)?;
    let track_ground = dim <= GROUND_TRACE_LIMIT;
    let mut trace = Vec::with_capacity(times.len());
    let mut ground = Vec::new();
    let mut ground_err = None;
    let last = evolve_scheduled_observed(&hw, &hp, sched, &psi0, &times, |t, psi| {
        let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        trace.push(TracePoint {
            t,
            success_probability: psi[m].norm_sqr(),
            norm,
        });
        if track_ground && ground_err.is_none() {
            match instantaneous_ground_overlap(&hw, &hp, sched, t, psi) {
                Ok(f) => ground.push((t, f)),
                Err(e) => ground_err = Some(e),
            }
        }
    })?;
    if let Some(e) = ground_err {
        return Err(e);
    }
    let peak = find_peak(
        &trace
            .iter()
            .map(|p| (p.t, p.success_probability))
            .collect::<Vec<_>>(),
    );
    Ok(RunResult {
        params: RunParams {
            n,
            dim,
            marked: Some(m),
            instance: Some(format!("hypercube(n={n})")),
            gamma,
            t_final: sched.t_final(),
            schedule: sched.tag().into(),
            schedule_family: Some(sched.family()),
            seed: None,
        },
        trace,
        final_fidelity: last.probability(m)?,
        peak,
        ground_fidelity: track_ground.then_some(ground),
        samples: None,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

fn instantaneous_ground_overlap(
    hw: &Hamiltonian,
    hp: &Hamiltonian,
    sched: &Schedule,
    t: f64,
    psi: &[C64],
) -> Result<f64> {
    let (a, b) = sched.weights(t);
    let h = add(&hw.scaled(a), &hp.scaled(b))?;
    let g = spectrum(&h)?.ground_state();
    let overlap: C64 = g.iter().zip(psi).map(|(x, y)| x.conj() * y).sum();
    Ok(overlap.norm_sqr())
}

/// Adiabatic search: `A(t) H_h + B(t) H_m` from the uniform state.
///
/// The schedule must satisfy the adiabatic endpoint constraints.
pub fn adiabatic_search(
    n: usize,
    m: usize,
    gamma: f64,
    sched: &Schedule,
    samples: usize,
) -> Result<RunResult> {
    if !sched.has_endpoint_constraints() {
        return Err(invalid(
            "adiabatic search needs a schedule with A(0) = B(t_f) = 1",
        ));
    }
    scheduled_search(n, m, gamma, sched, samples)
}

/// Search under any weight family, including the hybrid bridge and both of
/// its limits (constant weights and the linear ramp).
pub fn hybrid_search(
    n: usize,
    m: usize,
    sched: &Schedule,
    gamma: f64,
    samples: usize,
) -> Result<RunResult> {
    scheduled_search(n, m, gamma, sched, samples)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub dim: usize,
    pub gamma: f64,
    pub t_star: f64,
    pub peak: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapScalingRow {
    pub n: usize,
    pub dim: usize,
    pub gamma: f64,
    pub s_star: f64,
    pub gap_min: f64,
}

/// Rows plus the power-law fit `y ~ C N^p` over them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport<R> {
    pub rows: Vec<R>,
    pub fit: LinearFit,
}

/// Tuned walk search for each `n`; fits the peak time against `N`.
pub fn search_scaling(
    ns: &[usize],
    m: usize,
    samples: usize,
    exec: Execution,
) -> Result<ScalingReport<ScalingRow>> {
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let space = SearchSpace::Hypercube { n };
        let dim = space.dim();
        let tuning = tune_gamma(&space, m % dim, auto_horizon(dim), samples, exec)?;
        rows.push(ScalingRow {
            n,
            dim,
            gamma: tuning.gamma,
            t_star: tuning.t_peak,
            peak: tuning.peak_probability,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.dim as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.t_star).collect();
    let fit = power_law_fit(&xs, &ys)?;
    Ok(ScalingReport { rows, fit })
}

/// Minimum gap of `(1 - s) H_h(n, 1/n) + s H_m` for each `n`; fits the gap against `N`.
pub fn gap_scaling(
    ns: &[usize],
    m: usize,
    resolution: usize,
    exec: Execution,
) -> Result<ScalingReport<GapScalingRow>> {
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let gamma = 1.0 / n as f64;
        let dim = 1usize << n;
        let hw = hypercube_qubit_hamiltonian(n, gamma)?;
        let hp = marked_hamiltonian(dim, m % dim)?;
        let scan = min_gap(&hw, &hp, resolution, exec)?;
        rows.push(GapScalingRow {
            n,
            dim,
            gamma,
            s_star: scan.s_star,
            gap_min: scan.gap_min,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.dim as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.gap_min).collect();
    let fit = power_law_fit(&xs, &ys)?;
    Ok(ScalingReport { rows, fit })
}
