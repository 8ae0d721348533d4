//! Hamiltonians behind a uniform apply-to-state contract.
//!
//! Four storage forms share one interface:
//! - dense complex Hermitian matrices,
//! - sparse real symmetric matrices (walk Hamiltonians),
//! - real diagonals (marked-state and Ising problem Hamiltonians),
//! - the qubit-structured hypercube operator `gamma * (n - sum_j X_j)` plus an
//!   optional diagonal addend, applied in `O(n 2^n)` without a matrix.
//!
//! Spin and Pauli-Z conventions: qubit `j` is bit `j` of the basis index
//! (least-significant first), `Z_j |b> = (+1 if b_j = 1 else -1) |b>`, and an
//! Ising spin reads `s_j = +1` for bit 1.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, check_index, invalid, Error, Result};
use crate::graph::{laplacian_csr, Graph};
use crate::sparse::CsrMatrix;
use crate::C64;

/// Largest dimension converted to a dense matrix.
pub const DENSIFY_LIMIT: usize = 2048;

/// Largest qubit count for the structured hypercube operator.
pub const MAX_QUBITS: usize = 30;

const HERMITIAN_TOL: f64 = 1e-12;

/// `gamma * (n * 1 - sum_j X_j) + diag(addend)` on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct HypercubeOperator {
    n: usize,
    gamma: f64,
    diagonal: Option<Vec<f64>>,
}

impl HypercubeOperator {
    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn diagonal_addend(&self) -> Option<&[f64]> {
        self.diagonal.as_deref()
    }

    fn dim(&self) -> usize {
        1 << self.n
    }

    fn mul_acc(&self, x: &[C64], coeff: C64, out: &mut [C64]) {
        let n = self.n;
        let g = self.gamma;
        let gn = g * n as f64;
        match &self.diagonal {
            Some(d) => {
                for (j, o) in out.iter_mut().enumerate() {
                    let mut flips = C64::new(0.0, 0.0);
                    for b in 0..n {
                        flips += x[j ^ (1 << b)];
                    }
                    *o += coeff * (x[j] * (gn + d[j]) - flips * g);
                }
            }
            None => {
                for (j, o) in out.iter_mut().enumerate() {
                    let mut flips = C64::new(0.0, 0.0);
                    for b in 0..n {
                        flips += x[j ^ (1 << b)];
                    }
                    *o += coeff * (x[j] * gn - flips * g);
                }
            }
        }
    }

    fn to_csr(&self) -> CsrMatrix {
        let n = self.n;
        let gn = self.gamma * n as f64;
        let triplets = (0..self.dim()).flat_map(|j| {
            let d = self.diagonal.as_ref().map_or(0.0, |d| d[j]);
            std::iter::once((j, j, gn + d))
                .chain((0..n).map(move |b| (j, j ^ (1 << b), -self.gamma)))
        });
        CsrMatrix::from_triplets(self.dim(), triplets.collect::<Vec<_>>())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Representation {
    Dense(DMatrix<C64>),
    Sparse(CsrMatrix),
    Diagonal(Vec<f64>),
    Structured(HypercubeOperator),
}

enum DenseForm {
    Real(DMatrix<f64>),
    Complex(DMatrix<C64>),
}

/// A Hermitian operator on an `N`-dimensional state space.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    repr: Representation,
}

impl Hamiltonian {
    /// Wraps a dense matrix after checking it is square and Hermitian.
    pub fn dense(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(invalid("dense Hamiltonian must be square"));
        }
        let n = m.nrows();
        for r in 0..n {
            for c in r..n {
                if (m[(r, c)] - m[(c, r)].conj()).norm() > HERMITIAN_TOL {
                    return Err(invalid(format!("matrix is not Hermitian at ({r}, {c})")));
                }
            }
        }
        Ok(Hamiltonian {
            repr: Representation::Dense(m),
        })
    }

    pub fn dense_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::dense(m.map(|v| C64::new(v, 0.0)))
    }

    /// Wraps a sparse real matrix after checking symmetry.
    pub fn sparse(m: CsrMatrix) -> Result<Self> {
        if !m.is_symmetric() {
            return Err(invalid("sparse Hamiltonian must be symmetric"));
        }
        Ok(Hamiltonian {
            repr: Representation::Sparse(m),
        })
    }

    pub fn diagonal(d: Vec<f64>) -> Result<Self> {
        if d.is_empty() {
            return Err(invalid("Hamiltonian dimension must be positive"));
        }
        if d.iter().any(|v| !v.is_finite()) {
            return Err(invalid("diagonal entries must be finite"));
        }
        Ok(Hamiltonian {
            repr: Representation::Diagonal(d),
        })
    }

    /// The zero operator.
    pub fn zero(dim: usize) -> Result<Self> {
        Self::diagonal(vec![0.0; dim])
    }

    /// `c * 1`.
    pub fn identity_scaled(dim: usize, c: f64) -> Result<Self> {
        Self::diagonal(vec![c; dim])
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn dim(&self) -> usize {
        match &self.repr {
            Representation::Dense(m) => m.nrows(),
            Representation::Sparse(m) => m.dim(),
            Representation::Diagonal(d) => d.len(),
            Representation::Structured(h) => h.dim(),
        }
    }

    pub fn as_diagonal(&self) -> Option<&[f64]> {
        match &self.repr {
            Representation::Diagonal(d) => Some(d),
            _ => None,
        }
    }

    /// True when every matrix element is real.
    pub fn is_real(&self) -> bool {
        match &self.repr {
            Representation::Dense(m) => m.iter().all(|z| z.im == 0.0),
            _ => true,
        }
    }

    /// `H psi` as a new vector.
    pub fn apply(&self, psi: impl AsRef<[C64]>) -> Result<Vec<C64>> {
        let x = psi.as_ref();
        check_dim(self.dim(), x.len())?;
        let mut out = vec![C64::new(0.0, 0.0); x.len()];
        self.apply_acc(x, C64::new(1.0, 0.0), &mut out);
        Ok(out)
    }

    /// `out += coeff * H x`. Lengths must equal `dim()`; this is the
    /// allocation-free kernel used by the integrators.
    pub fn apply_acc(&self, x: &[C64], coeff: C64, out: &mut [C64]) {
        assert_eq!(x.len(), self.dim());
        assert_eq!(out.len(), self.dim());
        match &self.repr {
            Representation::Dense(m) => {
                let n = m.nrows();
                for (r, o) in out.iter_mut().enumerate() {
                    let mut acc = C64::new(0.0, 0.0);
                    for c in 0..n {
                        acc += m[(r, c)] * x[c];
                    }
                    *o += coeff * acc;
                }
            }
            Representation::Sparse(m) => m.mul_acc(x, coeff, out),
            Representation::Diagonal(d) => {
                for ((o, &xi), &di) in out.iter_mut().zip(x).zip(d) {
                    *o += coeff * (xi * di);
                }
            }
            Representation::Structured(h) => h.mul_acc(x, coeff, out),
        }
    }

    /// One fused Taylor stage: `out = coeff * (H - shift) x` and `acc += out`.
    pub(crate) fn shifted_stage(
        &self,
        x: &[C64],
        coeff: C64,
        shift: f64,
        out: &mut [C64],
        acc: &mut [C64],
    ) {
        debug_assert_eq!(x.len(), self.dim());
        match &self.repr {
            Representation::Sparse(m) => m.shifted_stage(x, coeff, shift, out, acc),
            Representation::Diagonal(d) => {
                for j in 0..x.len() {
                    let v = coeff * (x[j] * (d[j] - shift));
                    out[j] = v;
                    acc[j] += v;
                }
            }
            Representation::Structured(h) => {
                let n = h.n;
                let g = h.gamma;
                let gn = g * n as f64 - shift;
                for j in 0..x.len() {
                    let mut flips = C64::new(0.0, 0.0);
                    for b in 0..n {
                        flips += x[j ^ (1 << b)];
                    }
                    let d = h.diagonal.as_ref().map_or(0.0, |d| d[j]);
                    let v = coeff * (x[j] * (gn + d) - flips * g);
                    out[j] = v;
                    acc[j] += v;
                }
            }
            Representation::Dense(_) => {
                out.iter_mut().for_each(|o| *o = C64::new(0.0, 0.0));
                self.apply_acc(x, coeff, out);
                for j in 0..x.len() {
                    out[j] -= coeff * x[j] * shift;
                    acc[j] += out[j];
                }
            }
        }
    }

    /// Interval `[lo, hi]` guaranteed to contain the spectrum.
    pub fn spectral_interval(&self) -> (f64, f64) {
        let min_max = |d: &[f64]| {
            d.iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                    (lo.min(v), hi.max(v))
                })
        };
        match &self.repr {
            Representation::Dense(m) => {
                let n = m.nrows();
                (0..n).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                    let radius: f64 = (0..n).filter(|&c| c != r).map(|c| m[(r, c)].norm()).sum();
                    let center = m[(r, r)].re;
                    (lo.min(center - radius), hi.max(center + radius))
                })
            }
            Representation::Sparse(m) => m.gershgorin(),
            Representation::Diagonal(d) => min_max(d),
            Representation::Structured(h) => {
                let span = 2.0 * h.gamma * h.n as f64;
                let (dlo, dhi) = h.diagonal.as_deref().map_or((0.0, 0.0), min_max);
                (span.min(0.0) + dlo, span.max(0.0) + dhi)
            }
        }
    }

    /// Cheap upper bound on the operator norm.
    ///
    /// Structured: `2 |gamma| n + max|addend|`; diagonal: `max|entry|`;
    /// matrices: maximum absolute row sum.
    pub fn norm_bound(&self) -> f64 {
        match &self.repr {
            Representation::Dense(m) => m
                .row_iter()
                .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
                .fold(0.0, f64::max),
            Representation::Sparse(m) => m.max_row_abs_sum(),
            Representation::Diagonal(d) => d.iter().fold(0.0, |a, v| a.max(v.abs())),
            Representation::Structured(h) => {
                let dmax = h
                    .diagonal
                    .as_deref()
                    .map_or(0.0, |d| d.iter().fold(0.0f64, |a, v| a.max(v.abs())));
                2.0 * h.gamma.abs() * h.n as f64 + dmax
            }
        }
    }

    /// `c * H` in the same representation.
    pub fn scaled(&self, c: f64) -> Self {
        let repr = match &self.repr {
            Representation::Dense(m) => Representation::Dense(m.map(|z| z * c)),
            Representation::Sparse(m) => Representation::Sparse(m.scaled(c)),
            Representation::Diagonal(d) => {
                Representation::Diagonal(d.iter().map(|v| v * c).collect())
            }
            Representation::Structured(h) => Representation::Structured(HypercubeOperator {
                n: h.n,
                gamma: h.gamma * c,
                diagonal: h
                    .diagonal
                    .as_ref()
                    .map(|d| d.iter().map(|v| v * c).collect()),
            }),
        };
        Hamiltonian { repr }
    }

    /// Dense complex matrix, for dimensions up to [`DENSIFY_LIMIT`].
    pub fn to_dense(&self) -> Result<DMatrix<C64>> {
        Ok(match self.densify()? {
            DenseForm::Real(m) => m.map(|v| C64::new(v, 0.0)),
            DenseForm::Complex(m) => m,
        })
    }

    /// Dense real matrix when the operator is real, for dimensions up to [`DENSIFY_LIMIT`].
    pub fn to_dense_real(&self) -> Result<Option<DMatrix<f64>>> {
        Ok(match self.densify()? {
            DenseForm::Real(m) => Some(m),
            DenseForm::Complex(_) => None,
        })
    }

    fn densify(&self) -> Result<DenseForm> {
        let n = self.dim();
        if n > DENSIFY_LIMIT {
            return Err(Error::TooLarge {
                dim: n,
                limit: DENSIFY_LIMIT,
            });
        }
        Ok(match &self.repr {
            Representation::Dense(m) if self.is_real() => DenseForm::Real(m.map(|z| z.re)),
            Representation::Dense(m) => DenseForm::Complex(m.clone()),
            Representation::Sparse(m) => DenseForm::Real(m.to_dense()),
            Representation::Diagonal(d) => DenseForm::Real(DMatrix::from_diagonal(
                &nalgebra::DVector::from_column_slice(d),
            )),
            Representation::Structured(h) => DenseForm::Real(h.to_csr().to_dense()),
        })
    }

    fn to_csr(&self) -> Option<CsrMatrix> {
        match &self.repr {
            Representation::Dense(_) => None,
            Representation::Sparse(m) => Some(m.clone()),
            Representation::Diagonal(d) => Some(CsrMatrix::from_triplets(
                d.len(),
                d.iter()
                    .enumerate()
                    .map(|(j, &v)| (j, j, v))
                    .collect::<Vec<_>>(),
            )),
            Representation::Structured(h) => Some(h.to_csr()),
        }
    }
}

/// Walk Hamiltonian `<j|H|k> = -gamma L_jk` of a graph, stored sparse.
pub fn walk_hamiltonian(g: &Graph, gamma: f64) -> Result<Hamiltonian> {
    check_rate(gamma)?;
    Ok(Hamiltonian {
        repr: Representation::Sparse(laplacian_csr(g).scaled(-gamma)),
    })
}

fn check_rate(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!(
            "transition rate must be positive, got {gamma}"
        )))
    }
}

/// Hypercube walk on `n` qubits, `gamma * (n 1 - sum_j X_j)`.
pub fn hypercube_qubit_hamiltonian(n: usize, gamma: f64) -> Result<Hamiltonian> {
    if n == 0 || n > MAX_QUBITS {
        return Err(invalid(format!(
            "qubit count must be in 1..={MAX_QUBITS}, got {n}"
        )));
    }
    check_rate(gamma)?;
    Ok(Hamiltonian {
        repr: Representation::Structured(HypercubeOperator {
            n,
            gamma,
            diagonal: None,
        }),
    })
}

/// `1 - |m><m|`: the marked state sits one unit of energy below the rest.
pub fn marked_hamiltonian(dim: usize, m: usize) -> Result<Hamiltonian> {
    check_index(m, dim)?;
    let mut d = vec![1.0; dim];
    d[m] = 0.0;
    Hamiltonian::diagonal(d)
}

/// `1 - 2^-n prod_j (1 + q_j Z_j)` with `q_j = +1` where bit `j` of `m` is 1.
///
/// Evaluated term by term on each basis state; equals [`marked_hamiltonian`].
pub fn marked_pauli_form(n: usize, m: usize) -> Result<Hamiltonian> {
    if n == 0 || n > MAX_QUBITS {
        return Err(invalid(format!(
            "qubit count must be in 1..={MAX_QUBITS}, got {n}"
        )));
    }
    let dim = 1usize << n;
    check_index(m, dim)?;
    let q: Vec<f64> = (0..n)
        .map(|j| if (m >> j) & 1 == 1 { 1.0 } else { -1.0 })
        .collect();
    let scale = 0.5f64.powi(n as i32);
    let d = (0..dim)
        .map(|z| {
            let product: f64 = (0..n)
                .map(|j| {
                    let z_eig = if (z >> j) & 1 == 1 { 1.0 } else { -1.0 };
                    1.0 + q[j] * z_eig
                })
                .product();
            1.0 - scale * product
        })
        .collect();
    Hamiltonian::diagonal(d)
}

/// Operator sum.
///
/// diagonal + diagonal stays diagonal, structured + diagonal keeps the
/// structured form with a diagonal addend, anything + dense is dense, and
/// the remaining sparse combinations are sparse.
pub fn add(h1: &Hamiltonian, h2: &Hamiltonian) -> Result<Hamiltonian> {
    use Representation as R;
    check_dim(h1.dim(), h2.dim())?;
    let repr = match (&h1.repr, &h2.repr) {
        (R::Diagonal(a), R::Diagonal(b)) => {
            R::Diagonal(a.iter().zip(b).map(|(x, y)| x + y).collect())
        }
        (R::Structured(s), R::Diagonal(d)) | (R::Diagonal(d), R::Structured(s)) => {
            R::Structured(HypercubeOperator {
                diagonal: Some(sum_addend(s.diagonal.as_deref(), d)),
                ..s.clone()
            })
        }
        (R::Structured(a), R::Structured(b)) => {
            let diagonal = match (&a.diagonal, &b.diagonal) {
                (None, None) => None,
                (Some(x), None) | (None, Some(x)) => Some(x.clone()),
                (Some(x), Some(y)) => Some(sum_addend(Some(x), y)),
            };
            R::Structured(HypercubeOperator {
                n: a.n,
                gamma: a.gamma + b.gamma,
                diagonal,
            })
        }
        (R::Dense(_), _) | (_, R::Dense(_)) => R::Dense(h1.to_dense()? + h2.to_dense()?),
        (R::Sparse(a), R::Diagonal(d)) | (R::Diagonal(d), R::Sparse(a)) => {
            R::Sparse(a.add_diagonal(d))
        }
        _ => {
            // Remaining pairs involve at least one sparse matrix.
            let a = h1.to_csr().expect("non-dense operand");
            let b = h2.to_csr().expect("non-dense operand");
            R::Sparse(a.add(&b))
        }
    };
    Ok(Hamiltonian { repr })
}

fn sum_addend(existing: Option<&[f64]>, extra: &[f64]) -> Vec<f64> {
    match existing {
        Some(e) => e.iter().zip(extra).map(|(a, b)| a + b).collect(),
        None => extra.to_vec(),
    }
}

/// Free-function form of [`Hamiltonian::apply`].
pub fn apply(h: &Hamiltonian, psi: impl AsRef<[C64]>) -> Result<Vec<C64>> {
    h.apply(psi)
}

/// Classical Ising energy function on `n` spins.
///
/// `E(z) = sum_{j<k} J_jk s_j s_k + sum_j h_j s_j` with `s_j = +1` when bit
/// `j` of `z` is set. Serialized as `{n, couplings: [[j, k, J]], fields}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsingModel {
    pub n: usize,
    pub couplings: Vec<(usize, usize, f64)>,
    pub fields: Vec<f64>,
}

impl IsingModel {
    pub fn new(n: usize, couplings: Vec<(usize, usize, f64)>, fields: Vec<f64>) -> Result<Self> {
        let model = IsingModel {
            n,
            couplings,
            fields,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_QUBITS {
            return Err(invalid(format!("spin count must be in 1..={MAX_QUBITS}")));
        }
        check_dim(self.n, self.fields.len())?;
        let mut seen = std::collections::BTreeSet::new();
        for &(j, k, v) in &self.couplings {
            check_index(j, self.n)?;
            check_index(k, self.n)?;
            if j == k {
                return Err(invalid(format!("coupling on a single spin {j}")));
            }
            if !v.is_finite() {
                return Err(invalid("couplings must be finite"));
            }
            if !seen.insert((j.min(k), j.max(k))) {
                return Err(invalid(format!("coupling ({j}, {k}) given twice")));
            }
        }
        if self.fields.iter().any(|h| !h.is_finite()) {
            return Err(invalid("fields must be finite"));
        }
        Ok(())
    }

    /// Fully connected spin glass with `J_jk ~ N(0, 1) / sqrt(n)` and no fields.
    pub fn sherrington_kirkpatrick(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = 1.0 / (n as f64).sqrt();
        let mut couplings = Vec::new();
        for j in 0..n {
            for k in j + 1..n {
                let x: f64 = StandardNormal.sample(&mut rng);
                couplings.push((j, k, x * scale));
            }
        }
        Self::new(n, couplings, vec![0.0; n])
    }

    pub fn energy(&self, z: usize) -> f64 {
        let s = |j: usize| if (z >> j) & 1 == 1 { 1.0 } else { -1.0 };
        let pair: f64 = self
            .couplings
            .iter()
            .map(|&(j, k, v)| v * s(j) * s(k))
            .sum();
        let field: f64 = self.fields.iter().enumerate().map(|(j, h)| h * s(j)).sum();
        pair + field
    }

    pub fn energies(&self) -> Vec<f64> {
        (0..1usize << self.n).map(|z| self.energy(z)).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: IsingModel = serde_json::from_str(text)?;
        model.validate()?;
        Ok(model)
    }
}

/// Diagonal Hamiltonian of an Ising energy function.
pub fn ising_hamiltonian(model: &IsingModel) -> Result<Hamiltonian> {
    model.validate()?;
    Hamiltonian::diagonal(model.energies())
}

/// Minimum energy and every basis index attaining it (within `1e-12`).
pub fn ground_states(diagonal: &[f64]) -> (f64, Vec<usize>) {
    let min = diagonal.iter().copied().fold(f64::INFINITY, f64::min);
    let idx = diagonal
        .iter()
        .enumerate()
        .filter(|(_, &e)| e - min <= 1e-12)
        .map(|(j, _)| j)
        .collect();
    (min, idx)
}

/// JSON record for a plain diagonal Hamiltonian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagonalRecord {
    pub dim: usize,
    pub diagonal: Vec<f64>,
}

impl DiagonalRecord {
    pub fn from_hamiltonian(h: &Hamiltonian) -> Result<Self> {
        let d = h
            .as_diagonal()
            .ok_or_else(|| invalid("not a diagonal Hamiltonian"))?;
        Ok(DiagonalRecord {
            dim: d.len(),
            diagonal: d.to_vec(),
        })
    }

    pub fn to_hamiltonian(&self) -> Result<Hamiltonian> {
        check_dim(self.dim, self.diagonal.len())?;
        Hamiltonian::diagonal(self.diagonal.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_graph, GraphKind};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn basis(j: usize, n: usize) -> Vec<C64> {
        let mut v = vec![c(0.0); n];
        v[j] = c(1.0);
        v
    }

    #[test]
    fn line_walk_matrix() {
        let g = make_graph(GraphKind::Line, 2, None).unwrap();
        let h = walk_hamiltonian(&g, 1.0).unwrap();
        let d = h.to_dense_real().unwrap().unwrap();
        assert_eq!(d, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        assert!(walk_hamiltonian(&g, 0.0).is_err());
        assert!(walk_hamiltonian(&g, -1.0).is_err());
    }

    #[test]
    fn single_qubit_hypercube() {
        let h = hypercube_qubit_hamiltonian(1, 1.0).unwrap();
        let d = h.to_dense_real().unwrap().unwrap();
        assert_eq!(d, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        assert!(hypercube_qubit_hamiltonian(0, 1.0).is_err());
        assert!(hypercube_qubit_hamiltonian(31, 1.0).is_err());
    }

    #[test]
    fn hypercube_on_zero_state() {
        let h = hypercube_qubit_hamiltonian(3, 1.0).unwrap();
        let out = h.apply(basis(0, 8)).unwrap();
        let mut expect = vec![c(0.0); 8];
        expect[0] = c(3.0);
        expect[1] = c(-1.0);
        expect[2] = c(-1.0);
        expect[4] = c(-1.0);
        assert_eq!(out, expect);
    }

    #[test]
    fn marked_forms() {
        assert_eq!(
            marked_hamiltonian(4, 3).unwrap().as_diagonal().unwrap(),
            &[1.0, 1.0, 1.0, 0.0]
        );
        assert_eq!(
            marked_hamiltonian(2, 0).unwrap().as_diagonal().unwrap(),
            &[0.0, 1.0]
        );
        assert_eq!(
            marked_pauli_form(1, 1).unwrap().as_diagonal().unwrap(),
            &[1.0, 0.0]
        );
        assert_eq!(
            marked_pauli_form(2, 0).unwrap().as_diagonal().unwrap(),
            &[0.0, 1.0, 1.0, 1.0]
        );
        assert!(marked_hamiltonian(4, 4).is_err());
        assert!(marked_pauli_form(2, 4).is_err());
    }

    #[test]
    fn ising_small_cases() {
        let pair = IsingModel::new(2, vec![(0, 1, 1.0)], vec![0.0, 0.0]).unwrap();
        assert_eq!(
            ising_hamiltonian(&pair).unwrap().as_diagonal().unwrap(),
            &[1.0, -1.0, -1.0, 1.0]
        );
        let field = IsingModel::new(1, vec![], vec![1.0]).unwrap();
        assert_eq!(
            ising_hamiltonian(&field).unwrap().as_diagonal().unwrap(),
            &[-1.0, 1.0]
        );
        assert!(IsingModel::new(2, vec![(0, 2, 1.0)], vec![0.0, 0.0]).is_err());
        assert!(IsingModel::new(2, vec![(1, 1, 1.0)], vec![0.0, 0.0]).is_err());
        assert!(IsingModel::new(2, vec![(0, 1, 1.0), (1, 0, 2.0)], vec![0.0, 0.0]).is_err());
        assert!(IsingModel::new(2, vec![], vec![0.0]).is_err());
    }

    #[test]
    fn ising_json_round_trip() {
        let model = IsingModel::sherrington_kirkpatrick(4, 3).unwrap();
        let text = model.to_json().unwrap();
        assert!(text.contains("\"couplings\""));
        assert_eq!(IsingModel::from_json(&text).unwrap(), model);
        assert!(
            IsingModel::from_json(r#"{"n":1,"couplings":[],"fields":[0.0],"extra":1}"#).is_err()
        );
        let rec = DiagonalRecord::from_hamiltonian(&ising_hamiltonian(&model).unwrap()).unwrap();
        let back: DiagonalRecord =
            serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
        assert_eq!(
            back.to_hamiltonian().unwrap().as_diagonal(),
            Some(&rec.diagonal[..])
        );
    }

    #[test]
    fn sum_keeps_fast_forms() {
        let hh = hypercube_qubit_hamiltonian(2, 0.5).unwrap();
        let hm = marked_hamiltonian(4, 3).unwrap();
        let s = add(&hh, &hm).unwrap();
        assert!(matches!(s.representation(), Representation::Structured(_)));
        let out = s.apply(basis(3, 4)).unwrap();
        // gamma (2|11> - |10> - |01>) + 0
        let expect = [c(0.0), c(-0.5), c(-0.5), c(1.0)];
        for (a, b) in out.iter().zip(expect) {
            assert!((a - b).norm() < 1e-12);
        }
        let z = Hamiltonian::zero(4).unwrap();
        assert_eq!(add(&hm, &z).unwrap(), hm);
        assert!(add(&hm, &Hamiltonian::zero(8).unwrap()).is_err());
        let d = Hamiltonian::dense_real(&hm.to_dense_real().unwrap().unwrap()).unwrap();
        assert!(matches!(
            add(&hh, &d).unwrap().representation(),
            Representation::Dense(_)
        ));
    }

    #[test]
    fn identity_scaled_apply() {
        let h = Hamiltonian::identity_scaled(3, 2.5).unwrap();
        let psi = vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.0), C64::new(0.0, 1.0)];
        let out = h.apply(&psi).unwrap();
        for (o, p) in out.iter().zip(&psi) {
            assert_eq!(*o, p * 2.5);
        }
        assert!(h.apply(vec![c(1.0); 2]).is_err());
    }

    #[test]
    fn dense_constructor_rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0), C64::new(0.0, 1.0), C64::new(0.0, 1.0), c(1.0)],
        );
        assert!(Hamiltonian::dense(m).is_err());
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), c(1.0)],
        );
        let h = Hamiltonian::dense(m).unwrap();
        assert!(!h.is_real());
        assert!(h.to_dense_real().unwrap().is_none());
    }

    #[test]
    fn bounds_contain_known_spectra() {
        let h = hypercube_qubit_hamiltonian(3, 0.5).unwrap();
        assert_eq!(h.spectral_interval(), (0.0, 3.0));
        assert_eq!(h.norm_bound(), 3.0);
        let s = add(&h, &marked_hamiltonian(8, 1).unwrap()).unwrap();
        assert_eq!(s.spectral_interval(), (0.0, 4.0));
        assert_eq!(s.norm_bound(), 4.0);
        let g = make_graph(GraphKind::Line, 5, None).unwrap();
        let w = walk_hamiltonian(&g, 1.0).unwrap();
        assert_eq!(w.spectral_interval(), (0.0, 4.0));
        assert_eq!(w.norm_bound(), 4.0);
    }

    #[test]
    fn densify_limit() {
        let h = hypercube_qubit_hamiltonian(12, 1.0).unwrap();
        assert!(matches!(h.to_dense(), Err(Error::TooLarge { .. })));
    }
}
