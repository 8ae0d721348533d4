//! One runner per command. Each returns the JSON result body and the CSV
//! tables to write next to it.

use std::fmt::Write as _;

use serde_json::{json, Value};

use super::config::*;
use crate::dynamics::{
    basis_state, evolve_static_sampled, gap_at, min_gap, sample_times, spread_of, Backend, Schedule,
};
use crate::encode::encoding_cost;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{make_graph, GluedTreesLayout, Graph, GraphKind};
use crate::hamiltonian::{
    hypercube_qubit_hamiltonian, ising_hamiltonian, marked_hamiltonian, walk_hamiltonian,
    IsingModel, DENSIFY_LIMIT,
};
use crate::protocols::{
    adiabatic_search, auto_gamma_grid, auto_horizon, csv_float as f, find_peak, gap_scaling,
    glued_trees_trajectory, hybrid_search, repeated_short_runs, search_run, search_scaling,
    tune_gamma, tune_short_runs, RunResult, SearchSpace,
};
use crate::stats::binomial_upper_tail;

/// A CSV table: file name and full contents including the header row.
pub type Table = (&'static str, String);

pub struct Artifacts {
    pub result: Value,
    pub tables: Vec<Table>,
}

pub fn execute(exp: &Experiment, exec: Execution) -> Result<Artifacts> {
    match exp {
        Experiment::Walk(p) => walk(p),
        Experiment::Search(p) => search(p, exec),
        Experiment::Adiabatic(p) => {
            let gamma = p.gamma.unwrap_or(1.0 / p.n.max(1) as f64);
            let sched = Schedule::adiabatic(p.t_final, p.curve)?;
            scheduled(adiabatic_search(p.n, p.m, gamma, &sched, p.samples)?)
        }
        Experiment::Hybrid(p) => {
            let gamma = p.gamma.unwrap_or(1.0 / p.n.max(1) as f64);
            let sched = Schedule::new(p.t_final, p.schedule)?;
            scheduled(hybrid_search(p.n, p.m, &sched, gamma, p.samples)?)
        }
        Experiment::Gapscan(p) => gapscan(p, exec),
        Experiment::SkSample(p) => sk_sample(p, exec),
        Experiment::GluedTrees(p) => glued_trees(p),
        Experiment::EncodeTable(p) => encode_table(p),
        Experiment::Scaling(p) => scaling(p, exec),
    }
}

fn csv(header: &str) -> String {
    let mut s = String::with_capacity(4096);
    s.push_str(header);
    s.push('\n');
    s
}

fn walk(p: &WalkParams) -> Result<Artifacts> {
    let g = match (&p.graph, &p.edges) {
        (GraphKind::Custom, Some(path)) => Graph::from_edge_list(&std::fs::read_to_string(path)?)?,
        (kind, _) => make_graph(*kind, p.size, p.seed)?,
    };
    let dim = g.num_vertices();
    let start = p.start.unwrap_or(match g.kind() {
        GraphKind::Line => dim / 2,
        GraphKind::GluedTrees => GluedTreesLayout::new(p.size).entrance(),
        _ => 0,
    });
    let h = walk_hamiltonian(&g, p.gamma)?;
    let psi0 = basis_state(start, dim)?;
    let times = sample_times(p.t_final, p.samples)?;
    let line = g.kind() == GraphKind::Line;
    let mut table = csv(if line {
        "t,norm,p_start,sigma"
    } else {
        "t,norm,p_start"
    });
    let mut last = (0.0, 0.0, 0.0);
    evolve_static_sampled(&h, &psi0, &times, Backend::Auto, |t, psi| {
        let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let p_start = psi[start].norm_sqr();
        if line {
            let sigma = spread_of(psi);
            let _ = writeln!(table, "{},{},{},{}", f(t), f(norm), f(p_start), f(sigma));
            last = (norm, p_start, sigma);
        } else {
            let _ = writeln!(table, "{},{},{}", f(t), f(norm), f(p_start));
            last = (norm, p_start, f64::NAN);
        }
    })?;
    let mut result = json!({
        "vertices": dim,
        "edges": g.edges().len(),
        "start": start,
        "final_norm": last.0,
        "final_p_start": last.1,
    });
    if line {
        result["final_sigma"] = json!(last.2);
    }
    Ok(Artifacts {
        result,
        tables: vec![("trace.csv", table)],
    })
}

fn run_summary(run: &RunResult) -> Value {
    json!({
        "run": run.params,
        "t_star": run.peak.t,
        "peak_probability": run.peak.probability,
        "final_probability": run.final_fidelity,
        "final_norm": run.trace.last().map(|p| p.norm),
    })
}

fn search(p: &SearchParams, exec: Execution) -> Result<Artifacts> {
    let space = SearchSpace::Hypercube { n: p.n };
    let dim = space.dim();
    let t_final = match p.t_final {
        Auto::Value(t) => t,
        Auto::Auto(_) => auto_horizon(dim),
    };
    let (gamma, tuning) = match p.gamma {
        Auto::Value(g) => (g, None),
        Auto::Auto(_) => {
            let tuning = tune_gamma(&space, p.m, t_final, p.samples, exec)?;
            (tuning.gamma, Some(tuning))
        }
    };
    let run = search_run(&space, p.m, gamma, t_final, p.samples)?;
    let mut result = run_summary(&run);
    result["gamma"] = json!(gamma);
    result["t_final"] = json!(t_final);
    if let Some(t) = tuning {
        result["tuning"] = json!(t);
    }
    Ok(Artifacts {
        result,
        tables: vec![("trace.csv", run.trace_csv())],
    })
}

fn scheduled(run: RunResult) -> Result<Artifacts> {
    let mut result = run_summary(&run);
    if let Some(g) = &run.ground_fidelity {
        result["final_ground_fidelity"] = json!(g.last().map(|x| x.1));
        result["ground_fidelity"] = json!(g);
    }
    Ok(Artifacts {
        result,
        tables: vec![("trace.csv", run.trace_csv())],
    })
}

/// `2^n`, provided the matrix can be diagonalized densely.
fn densifiable(n: usize) -> Result<usize> {
    if n >= 63 || (1usize << n) > DENSIFY_LIMIT {
        return Err(Error::TooLarge {
            dim: 1usize << n.min(63),
            limit: DENSIFY_LIMIT,
        });
    }
    Ok(1 << n)
}

fn gapscan(p: &GapscanParams, exec: Execution) -> Result<Artifacts> {
    let dim = densifiable(p.n)?;
    let gamma = p.gamma.unwrap_or(1.0 / p.n.max(1) as f64);
    let hw = hypercube_qubit_hamiltonian(p.n, gamma)?;
    let hp = marked_hamiltonian(dim, p.m)?;
    let scan = min_gap(&hw, &hp, p.resolution, exec)?;
    let mut points = scan.curve.clone();
    if !points.iter().any(|q| q.s == scan.s_star) {
        points.push(gap_at(&hw, &hp, scan.s_star)?);
        points.sort_by(|a, b| a.s.total_cmp(&b.s));
    }
    let mut table = csv("s,E0,E1,gap");
    for q in &points {
        let _ = writeln!(table, "{},{},{},{}", f(q.s), f(q.e0), f(q.e1), f(q.gap));
    }
    let result = json!({
        "dim": dim,
        "gamma": gamma,
        "s_star": scan.s_star,
        "gap_min": scan.gap_min,
        "degenerate": scan.degenerate,
    });
    Ok(Artifacts {
        result,
        tables: vec![("gap.csv", table)],
    })
}

/// Run-time grid for short-run tuning: 64 points up to the search horizon.
fn short_run_times(n: usize) -> Vec<f64> {
    let horizon = auto_horizon(1 << n);
    (1..=64).map(|k| horizon * k as f64 / 64.0).collect()
}

fn sk_sample(p: &SkSampleParams, exec: Execution) -> Result<Artifacts> {
    let model = match &p.instance {
        Some(path) => IsingModel::from_json(&std::fs::read_to_string(path)?)?,
        None => IsingModel::sherrington_kirkpatrick(p.n, p.seed)?,
    };
    let n = model.n;
    let h = ising_hamiltonian(&model)?;
    let (gamma, t_run, tuning) = match (p.gamma, p.t_run) {
        (Auto::Value(g), Auto::Value(t)) => (g, t, None),
        (g, t) => {
            let gammas = match g {
                Auto::Value(g) => vec![g],
                Auto::Auto(_) => auto_gamma_grid(n),
            };
            let times = match t {
                Auto::Value(t) => vec![t],
                Auto::Auto(_) => short_run_times(n),
            };
            let tuned = tune_short_runs(&h, n, &gammas, &times, exec)?;
            (tuned.gamma, tuned.t_run, Some(tuned))
        }
    };
    let report = repeated_short_runs(&h, n, gamma, t_run, p.shots, p.seed)?;
    let hits = (report.hit_rate * report.shots as f64).round() as usize;
    let p_value = binomial_upper_tail(hits, report.shots, report.uniform_baseline);
    let mut table = csv("shot,index,bits,energy");
    for (shot, (&j, &e)) in report.samples.iter().zip(&report.energies).enumerate() {
        let _ = writeln!(
            table,
            "{shot},{j},{},{}",
            crate::encode::bitstring(j, n)?,
            f(e)
        );
    }
    let result = json!({
        "instance": model,
        "gamma": gamma,
        "t_run": t_run,
        "tuning": tuning,
        "shots": report.shots,
        "best_index": report.best_index,
        "best_bits": report.best_bits,
        "best_energy": report.best_energy,
        "ground_energy": report.ground_energy,
        "ground_states": report.ground_states,
        "hits": hits,
        "hit_rate": report.hit_rate,
        "uniform_baseline": report.uniform_baseline,
        "p_value": p_value,
        "ground_probability": report.ground_probability,
    });
    Ok(Artifacts {
        result,
        tables: vec![("samples.csv", table)],
    })
}

fn glued_trees(p: &GluedTreesParams) -> Result<Artifacts> {
    let times = sample_times(p.t_final, p.samples)?;
    let (g, traj) = glued_trees_trajectory(p.depth, &times, p.seed)?;
    let exit = GluedTreesLayout::new(p.depth).exit();
    let mut table = csv("t,p_exit,norm");
    let mut curve = Vec::with_capacity(times.len());
    for (&t, s) in traj.times.iter().zip(&traj.states) {
        let pe = s.probability(exit)?;
        curve.push((t, pe));
        let _ = writeln!(table, "{},{},{}", f(t), f(pe), f(s.norm()));
    }
    let peak = find_peak(&curve);
    let result = json!({
        "vertices": g.num_vertices(),
        "exit": exit,
        "t_peak": peak.t,
        "peak_exit_probability": peak.probability,
    });
    Ok(Artifacts {
        result,
        tables: vec![("transport.csv", table)],
    })
}

fn encode_table(p: &EncodeTableParams) -> Result<Artifacts> {
    let mut table = csv("n,N,unary_symbols,binary_bits");
    let mut pattern = true;
    for n in 1..=p.max_n {
        let c = encoding_cost(1u64 << n)?;
        pattern &= c.binary_bits as usize == n && c.unary_symbols == c.problem_size;
        let _ = writeln!(
            table,
            "{n},{},{},{}",
            c.problem_size, c.unary_symbols, c.binary_bits
        );
    }
    let result = json!({ "rows": p.max_n, "binary_bits_equal_log2_n": pattern });
    Ok(Artifacts {
        result,
        tables: vec![("table.csv", table)],
    })
}

fn scaling(p: &ScalingParams, exec: Execution) -> Result<Artifacts> {
    let ns = &p.n_range.0;
    match p.protocol {
        ScalingProtocol::QwSearch => {
            let report = search_scaling(ns, p.m, p.samples, exec)?;
            let mut table = csv("n,N,gamma,t_star,peak");
            for r in &report.rows {
                let _ = writeln!(
                    table,
                    "{},{},{},{},{}",
                    r.n,
                    r.dim,
                    f(r.gamma),
                    f(r.t_star),
                    f(r.peak)
                );
            }
            let result = json!({
                "exponent": report.fit.slope,
                "prefactor": report.fit.intercept.exp(),
                "fit": report.fit,
                "rows": report.rows,
            });
            Ok(Artifacts {
                result,
                tables: vec![("scaling.csv", table)],
            })
        }
        ScalingProtocol::Gap => {
            for &n in ns {
                densifiable(n)?;
            }
            let report = gap_scaling(ns, p.m, p.resolution, exec)?;
            let mut table = csv("n,N,gamma,s_star,gap_min");
            for r in &report.rows {
                let _ = writeln!(
                    table,
                    "{},{},{},{},{}",
                    r.n,
                    r.dim,
                    f(r.gamma),
                    f(r.s_star),
                    f(r.gap_min)
                );
            }
            let result = json!({
                "exponent": report.fit.slope,
                "prefactor": report.fit.intercept.exp(),
                "fit": report.fit,
                "rows": report.rows,
            });
            Ok(Artifacts {
                result,
                tables: vec![("scaling.csv", table)],
            })
        }
    }
}
