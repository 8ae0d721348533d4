//! Entrance-to-exit transport on glued binary trees.

use crate::dynamics::{basis_state, evolve_static_sampled, Backend, QuantumState, Trajectory};
use crate::error::Result;
use crate::graph::{make_graph, GluedTreesLayout, Graph, GraphKind};
use crate::hamiltonian::walk_hamiltonian;

/// Walk from the entrance root with `gamma = 1`, sampled at `t_grid`.
pub fn glued_trees_trajectory(
    depth: usize,
    t_grid: &[f64],
    seed: u64,
) -> Result<(Graph, Trajectory)> {
    let g = make_graph(GraphKind::GluedTrees, depth, Some(seed))?;
    let layout = GluedTreesLayout::new(depth);
    let h = walk_hamiltonian(&g, 1.0)?;
    let psi0 = basis_state(layout.entrance(), g.num_vertices())?;
    let mut states = Vec::with_capacity(t_grid.len());
    evolve_static_sampled(&h, &psi0, t_grid, Backend::Auto, |_, psi| {
        states.push(QuantumState::from_raw(psi.to_vec()))
    })?;
    Ok((
        g,
        Trajectory {
            times: t_grid.to_vec(),
            states,
        },
    ))
}

/// `(t, |<exit|psi(t)>|^2)` over `t_grid`.
pub fn glued_trees_transport(depth: usize, t_grid: &[f64], seed: u64) -> Result<Vec<(f64, f64)>> {
    let layout = GluedTreesLayout::new(depth);
    let (_, traj) = glued_trees_trajectory(depth, t_grid, seed)?;
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&t, s)| Ok((t, s.probability(layout.exit())?)))
        .collect()
}
