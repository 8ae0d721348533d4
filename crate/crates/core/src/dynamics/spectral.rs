//! Dense eigendecomposition and minimum-gap scans along
//! `H(s) = (1 - s) H_walk + s H_problem`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Result};
use crate::exec::Execution;
use crate::hamiltonian::Hamiltonian;
use crate::stats::golden_section_min;
use crate::C64;

/// Gaps below this are reported as degenerate.
pub const DEGENERATE_GAP: f64 = 1e-12;

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl Eigensystem {
    pub fn ground_state(&self) -> Vec<C64> {
        self.vectors.column(0).iter().copied().collect()
    }
}

fn sort_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    order
}

/// Full eigendecomposition of a densifiable Hamiltonian.
pub fn spectrum(h: &Hamiltonian) -> Result<Eigensystem> {
    let (values, vectors) = match h.to_dense_real()? {
        Some(m) => {
            let eig = SymmetricEigen::new(m);
            (
                eig.eigenvalues.as_slice().to_vec(),
                eig.eigenvectors.map(|v| C64::new(v, 0.0)),
            )
        }
        None => {
            let eig = SymmetricEigen::new(h.to_dense()?);
            (eig.eigenvalues.as_slice().to_vec(), eig.eigenvectors)
        }
    };
    let order = sort_order(&values);
    let n = values.len();
    let sorted_values = order.iter().map(|&k| values[k]).collect();
    let sorted_vectors = DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Ok(Eigensystem {
        values: sorted_values,
        vectors: sorted_vectors,
    })
}

/// Ascending eigenvalues only.
pub fn eigenvalues(h: &Hamiltonian) -> Result<Vec<f64>> {
    let mut values: Vec<f64> = match h.to_dense_real()? {
        Some(m) => m.symmetric_eigenvalues().as_slice().to_vec(),
        None => h.to_dense()?.symmetric_eigenvalues().as_slice().to_vec(),
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    pub s: f64,
    pub e0: f64,
    pub e1: f64,
    pub gap: f64,
}

/// Result of a gap scan: the uniform curve plus the refined minimum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapScan {
    pub curve: Vec<GapPoint>,
    pub s_star: f64,
    pub gap_min: f64,
    /// Ground level is degenerate (gap below [`DEGENERATE_GAP`]) at the minimum.
    pub degenerate: bool,
}

enum Pencil {
    Real(DMatrix<f64>, DMatrix<f64>),
    Complex(DMatrix<C64>, DMatrix<C64>),
}

impl Pencil {
    fn new(h_walk: &Hamiltonian, h_problem: &Hamiltonian) -> Result<Self> {
        check_dim(h_walk.dim(), h_problem.dim())?;
        if h_walk.dim() < 2 {
            return Err(invalid("gap needs at least two levels"));
        }
        Ok(
            match (h_walk.to_dense_real()?, h_problem.to_dense_real()?) {
                (Some(a), Some(b)) => Pencil::Real(a, b),
                _ => Pencil::Complex(h_walk.to_dense()?, h_problem.to_dense()?),
            },
        )
    }

    fn lowest_two(&self, s: f64) -> (f64, f64) {
        let mut values: Vec<f64> = match self {
            Pencil::Real(a, b) => (a * (1.0 - s) + b * s)
                .symmetric_eigenvalues()
                .as_slice()
                .to_vec(),
            Pencil::Complex(a, b) => {
                let m = a.map(|z| z * (1.0 - s)) + b.map(|z| z * s);
                m.symmetric_eigenvalues().as_slice().to_vec()
            }
        };
        values.sort_by(f64::total_cmp);
        (values[0], values[1])
    }

    fn point(&self, s: f64) -> GapPoint {
        let (e0, e1) = self.lowest_two(s);
        GapPoint {
            s,
            e0,
            e1,
            gap: e1 - e0,
        }
    }
}

/// `E1 - E0` of `(1 - s) h_walk + s h_problem`, counting multiplicity.
pub fn gap_at(h_walk: &Hamiltonian, h_problem: &Hamiltonian, s: f64) -> Result<GapPoint> {
    Ok(Pencil::new(h_walk, h_problem)?.point(s))
}

/// Scans `s` uniformly over `[0, 1]` at `resolution` points, then refines the
/// coarse minimum by golden section to relative precision `1e-4`.
pub fn min_gap(
    h_walk: &Hamiltonian,
    h_problem: &Hamiltonian,
    resolution: usize,
    exec: Execution,
) -> Result<GapScan> {
    if resolution < 16 {
        return Err(invalid(format!(
            "gap scan resolution must be at least 16, got {resolution}"
        )));
    }
    let pencil = Pencil::new(h_walk, h_problem)?;
    let last = (resolution - 1) as f64;
    let curve = exec.map(resolution, |k| pencil.point(k as f64 / last));
    let (i_min, coarse) = curve
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.gap.total_cmp(&b.1.gap))
        .map(|(i, p)| (i, *p))
        .unwrap();
    let lo = curve[i_min.saturating_sub(1)].s;
    let hi = curve[(i_min + 1).min(resolution - 1)].s;
    let (s_ref, gap_ref) = golden_section_min(|s| pencil.point(s).gap, lo, hi, 1e-4);
    let (s_star, gap_min) = if gap_ref < coarse.gap {
        (s_ref, gap_ref)
    } else {
        (coarse.s, coarse.gap)
    };
    Ok(GapScan {
        curve,
        s_star,
        gap_min,
        degenerate: gap_min < DEGENERATE_GAP,
    })
}
