use super::evolve::Trajectory;
use crate::error::{check_dim, invalid, Result};
use crate::graph::{Graph, GraphKind};
use crate::C64;

/// Standard deviation of the vertex-position distribution `|psi_j|^2`.
pub fn spread_of(amplitudes: &[C64]) -> f64 {
    let total: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    let (mut m1, mut m2) = (0.0, 0.0);
    for (j, a) in amplitudes.iter().enumerate() {
        let p = a.norm_sqr() / total;
        let x = j as f64;
        m1 += p * x;
        m2 += p * x * x;
    }
    (m2 - m1 * m1).max(0.0).sqrt()
}

/// Position spread `(t, sigma(t))` of a walk on a line graph.
pub fn position_spread(traj: &Trajectory, line: &Graph) -> Result<Vec<(f64, f64)>> {
    if line.kind() != GraphKind::Line {
        return Err(invalid(format!(
            "position spread needs a line graph, got {}",
            line.kind()
        )));
    }
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&t, s)| {
            check_dim(line.num_vertices(), s.dim())?;
            Ok((t, spread_of(s.amplitudes())))
        })
        .collect()
}
