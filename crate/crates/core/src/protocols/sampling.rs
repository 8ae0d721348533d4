//! Projective measurement and the repeated-short-run sampling protocol.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{equal_superposition, evolve_static_sampled, Backend, QuantumState};
use crate::encode::bitstring;
use crate::error::{check_dim, check_index, invalid, Error, Result};
use crate::exec::Execution;
use crate::hamiltonian::{add, ground_states, hypercube_qubit_hamiltonian, Hamiltonian};

/// RNG for shot `shot` of a run seeded with `seed`: one ChaCha stream per shot.
fn shot_rng(seed: u64, shot: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot as u64);
    rng
}

/// Samples `shots` basis indices from `|amplitude|^2`.
pub fn measure(psi: &QuantumState, shots: usize, seed: u64) -> Result<Vec<usize>> {
    measure_with(psi, shots, seed, Execution::default())
}

pub fn measure_with(
    psi: &QuantumState,
    shots: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<usize>> {
    if shots == 0 {
        return Err(invalid("need at least one shot"));
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::Unnormalized { norm });
    }
    let mut cdf = psi.probabilities();
    for j in 1..cdf.len() {
        cdf[j] += cdf[j - 1];
    }
    let total = *cdf.last().unwrap();
    let last = cdf.len() - 1;
    Ok(exec.map(shots, |shot| {
        let u: f64 = shot_rng(seed, shot).random::<f64>() * total;
        cdf.partition_point(|&c| c <= u).min(last)
    }))
}

/// `|<m|psi>|^2`.
pub fn success_probability(psi: &QuantumState, m: usize) -> Result<f64> {
    psi.probability(m)
}

/// Measured indices as `n`-bit strings, most significant bit first.
pub fn readout(indices: &[usize], n: usize) -> Result<Vec<String>> {
    indices.iter().map(|&j| bitstring(j, n)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShortRunReport {
    pub n: usize,
    pub gamma: f64,
    pub t_run: f64,
    pub shots: usize,
    pub seed: u64,
    pub best_index: usize,
    pub best_bits: String,
    pub best_energy: f64,
    pub ground_energy: f64,
    pub ground_states: Vec<usize>,
    /// Fraction of shots landing on a ground state.
    pub hit_rate: f64,
    /// Hit rate of uniform guessing, `#ground states / 2^n`.
    pub uniform_baseline: f64,
    /// Exact probability mass on the ground states before measurement.
    pub ground_probability: f64,
    pub samples: Vec<usize>,
    pub energies: Vec<f64>,
}

fn short_run_state(
    h_problem: &Hamiltonian,
    n: usize,
    gamma: f64,
    t_run: f64,
) -> Result<QuantumState> {
    let h = add(&hypercube_qubit_hamiltonian(n, gamma)?, h_problem)?;
    let psi0 = equal_superposition(n)?;
    evolve_static_sampled(&h, &psi0, &[t_run], Backend::Auto, |_, _| {})
}

/// Evolves the uniform state under `H_h(n, gamma) + h_problem` for `t_run`,
/// measures once per shot, and reports the lowest-energy sample.
///
/// Every shot starts from the same state, so the state is computed once and
/// each shot draws from its own RNG stream.
pub fn repeated_short_runs(
    h_problem: &Hamiltonian,
    n: usize,
    gamma: f64,
    t_run: f64,
    shots: usize,
    seed: u64,
) -> Result<ShortRunReport> {
    let diag = h_problem
        .as_diagonal()
        .ok_or_else(|| invalid("problem Hamiltonian must be diagonal"))?;
    check_dim(1usize << n.min(crate::hamiltonian::MAX_QUBITS), diag.len())?;
    if !(t_run > 0.0 && t_run.is_finite()) {
        return Err(invalid(format!("run time must be positive, got {t_run}")));
    }
    if shots == 0 {
        return Err(invalid("need at least one shot"));
    }
    let psi = short_run_state(h_problem, n, gamma, t_run)?;
    let samples = measure(&psi, shots, seed)?;
    let energies: Vec<f64> = samples.iter().map(|&j| diag[j]).collect();
    let (ground_energy, ground) = ground_states(diag);
    let (best_shot, best_energy) =
        energies
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |(bi, be), (i, e)| if e < be { (i, e) } else { (bi, be) },
            );
    let best_index = samples[best_shot];
    let hits = samples
        .iter()
        .filter(|j| ground.binary_search(j).is_ok())
        .count();
    let ground_probability = ground
        .iter()
        .map(|&g| psi.probability(g))
        .sum::<Result<f64>>()?;
    Ok(ShortRunReport {
        n,
        gamma,
        t_run,
        shots,
        seed,
        best_index,
        best_bits: bitstring(best_index, n)?,
        best_energy,
        ground_energy,
        uniform_baseline: ground.len() as f64 / diag.len() as f64,
        ground_states: ground,
        hit_rate: hits as f64 / shots as f64,
        ground_probability,
        samples,
        energies,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShortRunTuning {
    pub gamma: f64,
    pub t_run: f64,
    pub ground_probability: f64,
}

/// Picks the `(gamma, t_run)` pair maximizing the exact ground-state
/// probability of one short run. `t_grid` must be increasing.
pub fn tune_short_runs(
    h_problem: &Hamiltonian,
    n: usize,
    gamma_grid: &[f64],
    t_grid: &[f64],
    exec: Execution,
) -> Result<ShortRunTuning> {
    let diag = h_problem
        .as_diagonal()
        .ok_or_else(|| invalid("problem Hamiltonian must be diagonal"))?;
    if gamma_grid.is_empty() || t_grid.is_empty() {
        return Err(invalid("tuning grids must be non-empty"));
    }
    let (_, ground) = ground_states(diag);
    for &g in &ground {
        check_index(g, diag.len())?;
    }
    let per_gamma = exec.try_map(gamma_grid.len(), |k| {
        let h = add(&hypercube_qubit_hamiltonian(n, gamma_grid[k])?, h_problem)?;
        let psi0 = equal_superposition(n)?;
        let mut best = (0.0, f64::NEG_INFINITY);
        evolve_static_sampled(&h, &psi0, t_grid, Backend::Auto, |t, psi| {
            let p: f64 = ground.iter().map(|&g| psi[g].norm_sqr()).sum();
            if p > best.1 {
                best = (t, p);
            }
        })?;
        Ok::<_, Error>(best)
    })?;
    let (k, &(t_run, p)) = per_gamma
        .iter()
        .enumerate()
        .fold(None::<(usize, &(f64, f64))>, |acc, (k, x)| match acc {
            Some((_, b)) if b.1 >= x.1 => acc,
            _ => Some((k, x)),
        })
        .unwrap();
    Ok(ShortRunTuning {
        gamma: gamma_grid[k],
        t_run,
        ground_probability: p,
    })
}
