use ctwalk::dynamics::{
    equal_superposition, evolve_scheduled, sample_times, QuantumState, Schedule, ScheduleFamily,
};
use ctwalk::graph::GluedTreesLayout;
use ctwalk::hamiltonian::{
    hypercube_qubit_hamiltonian, ising_hamiltonian, marked_hamiltonian, IsingModel,
};
use ctwalk::protocols::{
    adiabatic_search, auto_horizon, glued_trees_trajectory, glued_trees_transport, hybrid_search,
    measure, measure_with, qw_search, repeated_short_runs, search_run, tune_gamma, tune_short_runs,
    SearchSpace,
};
use ctwalk::{Execution, C64};
use nalgebra::DMatrix;

#[test]
fn measurement_frequencies_within_four_sigma() {
    let probs: [f64; 8] = [0.5, 0.25, 0.125, 0.0625, 0.0625, 0.0, 0.0, 0.0];
    let psi = QuantumState::from_amplitudes(
        probs
            .iter()
            .enumerate()
            .map(|(k, p)| C64::from_polar(p.sqrt(), k as f64))
            .collect(),
    )
    .unwrap();
    let shots = 40_000;
    let samples = measure(&psi, shots, 99).unwrap();
    let mut counts = [0usize; 8];
    for s in samples {
        counts[s] += 1;
    }
    for (k, &p) in probs.iter().enumerate() {
        let expect = p * shots as f64;
        let sd = (shots as f64 * p * (1.0 - p)).sqrt();
        assert!(
            (counts[k] as f64 - expect).abs() <= 4.0 * sd,
            "outcome {k}: {} vs {expect}",
            counts[k]
        );
    }
}

#[test]
fn measurement_is_seeded_and_mode_independent() {
    let psi = equal_superposition(6).unwrap();
    let a = measure_with(&psi, 500, 4, Execution::Sequential).unwrap();
    let b = measure_with(&psi, 500, 4, Execution::Parallel).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, measure(&psi, 500, 5).unwrap());
}

#[test]
fn search_time_at_six_qubits() {
    let space = SearchSpace::Hypercube { n: 6 };
    let tuning = tune_gamma(&space, 13, auto_horizon(64), 512, Execution::Parallel).unwrap();
    let quarter_period = std::f64::consts::PI * 8.0 / 2.0;
    assert!(
        (tuning.t_peak - quarter_period).abs() <= 0.25 * quarter_period,
        "t* = {}",
        tuning.t_peak
    );
    // Success probability oscillates: after the peak it falls by at least half.
    let run = qw_search(6, 13, tuning.gamma, 2.5 * tuning.t_peak).unwrap();
    let after_min = run
        .trace
        .iter()
        .filter(|p| p.t >= tuning.t_peak)
        .map(|p| p.success_probability)
        .fold(f64::INFINITY, f64::min);
    assert!(after_min <= 0.5 * run.peak.probability, "{after_min}");
}

#[test]
fn tuning_is_mode_independent() {
    let space = SearchSpace::Hypercube { n: 4 };
    let a = tune_gamma(&space, 3, 20.0, 128, Execution::Sequential).unwrap();
    let b = tune_gamma(&space, 3, 20.0, 128, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn search_run_traces_are_normalized() {
    let run = search_run(&SearchSpace::Hypercube { n: 7 }, 100, 0.1, 40.0, 200).unwrap();
    assert_eq!(run.trace.len(), 200);
    assert_eq!(run.trace[0].t, 0.0);
    assert!((run.trace[0].success_probability - 1.0 / 128.0).abs() < 1e-15);
    assert!(run.trace.iter().all(|p| (p.norm - 1.0).abs() < 1e-6));
    assert!(run.trace_csv().starts_with("t,prob_m,norm\n"));
}

#[test]
fn hybrid_reduces_to_adiabatic_and_to_walk_search() {
    let (n, m, gamma) = (4, 9, 0.25);
    let linear = Schedule::adiabatic_linear(20.0).unwrap();
    let pinned = Schedule::new(20.0, ScheduleFamily::HybridParametric { mix: 0.0 }).unwrap();
    let a = adiabatic_search(n, m, gamma, &linear, 41).unwrap();
    let h = hybrid_search(n, m, &pinned, gamma, 41).unwrap();
    for (p, q) in a.trace.iter().zip(&h.trace) {
        assert!((p.success_probability - q.success_probability).abs() < 1e-12);
    }

    let constant = Schedule::qw_constant(15.0).unwrap();
    let h = hybrid_search(n, m, &constant, gamma, 31).unwrap();
    let s = search_run(&SearchSpace::Hypercube { n }, m, gamma, 15.0, 31).unwrap();
    for (p, q) in s.trace.iter().zip(&h.trace) {
        assert!((p.success_probability - q.success_probability).abs() < 1e-8);
    }
}

#[test]
fn adiabatic_rejects_constant_schedule() {
    let constant = Schedule::qw_constant(5.0).unwrap();
    assert!(adiabatic_search(3, 1, 0.3, &constant, 10).is_err());
}

#[test]
fn adiabatic_tracks_ground_state_for_small_dims() {
    let sched = Schedule::adiabatic_linear(60.0).unwrap();
    let run = adiabatic_search(4, 5, 0.25, &sched, 21).unwrap();
    let ground = run.ground_fidelity.unwrap();
    assert_eq!(ground.len(), 21);
    assert!((ground[0].1 - 1.0).abs() < 1e-10);
    assert!((ground.last().unwrap().1 - run.final_fidelity).abs() < 1e-8);
}

#[test]
fn short_runs_start_uniform() {
    let model = IsingModel::sherrington_kirkpatrick(4, 3).unwrap();
    let h = ising_hamiltonian(&model).unwrap();
    let report = repeated_short_runs(&h, 4, 0.5, 1e-9, 100, 1).unwrap();
    let k = report.ground_states.len() as f64;
    assert!((report.ground_probability - k / 16.0).abs() < 1e-6);
    assert_eq!(report.uniform_baseline, k / 16.0);
}

#[test]
fn short_runs_on_marked_problem_match_search_trace() {
    // With a single marked state the problem Hamiltonian is the search oracle.
    let (n, m, gamma, t) = (5, 21, 0.2, 6.0);
    let hp = marked_hamiltonian(1 << n, m).unwrap();
    let report = repeated_short_runs(&hp, n, gamma, t, 50, 3).unwrap();
    let run = qw_search(n, m, gamma, t).unwrap();
    assert_eq!(report.ground_states, vec![m]);
    let diff = (report.ground_probability - run.final_fidelity).abs();
    assert!(diff < 1e-8, "{diff}");
    assert_eq!(report.samples.len(), 50);
    assert_eq!(
        report,
        repeated_short_runs(&hp, n, gamma, t, 50, 3).unwrap()
    );
}

#[test]
fn short_run_tuning_beats_uniform_on_sk() {
    let model = IsingModel::sherrington_kirkpatrick(5, 1).unwrap();
    let h = ising_hamiltonian(&model).unwrap();
    let gammas = ctwalk::protocols::auto_gamma_grid(5);
    let times: Vec<f64> = (1..=32).map(|k| k as f64 * 0.5).collect();
    let a = tune_short_runs(&h, 5, &gammas, &times, Execution::Sequential).unwrap();
    let b = tune_short_runs(&h, 5, &gammas, &times, Execution::Parallel).unwrap();
    assert_eq!(a, b);
    assert!(a.ground_probability > 2.0 / 32.0);
}

/// Exit probability from the column reduction of the depth-2 glued trees:
/// columns of sizes 1, 2, 4, 4, 2, 1, diagonal = degree, hopping
/// `-(edges between columns) / sqrt(size_a * size_b)`.
fn column_oracle(t: f64) -> f64 {
    let r2 = 2f64.sqrt();
    let mut h = DMatrix::<f64>::zeros(6, 6);
    let diag = [2.0, 3.0, 3.0, 3.0, 3.0, 2.0];
    let hop = [-r2, -r2, -2.0, -r2, -r2];
    for k in 0..6 {
        h[(k, k)] = diag[k];
    }
    for k in 0..5 {
        h[(k, k + 1)] = hop[k];
        h[(k + 1, k)] = hop[k];
    }
    let eig = h.symmetric_eigen();
    let amp: C64 = (0..6)
        .map(|k| {
            let v = eig.eigenvectors.column(k);
            C64::from_polar(v[0] * v[5], -eig.eigenvalues[k] * t)
        })
        .sum();
    amp.norm_sqr()
}

#[test]
fn glued_trees_transport_reaches_exit() {
    let times = sample_times(30.0, 601).unwrap();
    let curve = glued_trees_transport(2, &times, 7).unwrap();
    assert!(curve[0].1 < 1e-20);
    for &(t, p) in &curve {
        assert!((p - column_oracle(t)).abs() < 1e-9, "t={t}");
    }
    let best = curve.iter().map(|p| p.1).fold(0.0, f64::max);
    assert!(best >= 10.0 / 14.0, "{best}");
}

#[test]
fn glued_trees_amplitude_is_uniform_per_column() {
    for depth in [2, 3, 4] {
        let layout = GluedTreesLayout::new(depth);
        let times = [0.5, 2.0, 5.0];
        let (g, traj) = glued_trees_trajectory(depth, &times, 11).unwrap();
        for state in &traj.states {
            let amps = state.amplitudes();
            for col in 0..layout.num_columns() {
                let members: Vec<usize> = (0..g.num_vertices())
                    .filter(|&v| layout.column(v) == col)
                    .collect();
                for &v in &members[1..] {
                    assert!((amps[v] - amps[members[0]]).norm() < 1e-8, "depth {depth}");
                }
            }
        }
    }
}

#[test]
fn scheduled_runs_are_deterministic() {
    let hw = hypercube_qubit_hamiltonian(4, 0.25).unwrap();
    let hp = marked_hamiltonian(16, 2).unwrap();
    let psi0 = equal_superposition(4).unwrap();
    let sched = Schedule::hybrid(12.0, 0.4).unwrap();
    let a = evolve_scheduled(&hw, &hp, &sched, &psi0, 13).unwrap();
    let b = evolve_scheduled(&hw, &hp, &sched, &psi0, 13).unwrap();
    assert_eq!(a, b);
}
