use serde::{Deserialize, Serialize};

use crate::error::{check_dim, check_index, invalid, Error, Result};
use crate::hamiltonian::MAX_QUBITS;
use crate::C64;

/// Complex amplitude vector over `N` basis states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumState {
    amplitudes: Vec<C64>,
}

impl QuantumState {
    /// Wraps amplitudes whose norm is within `1e-6` of one.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(invalid("state dimension must be positive"));
        }
        let state = QuantumState { amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::Unnormalized { norm });
        }
        Ok(state)
    }

    /// Wraps amplitudes without checking the norm; evolution results use
    /// this so that drift stays observable.
    pub(crate) fn from_raw(amplitudes: Vec<C64>) -> Self {
        QuantumState { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QuantumState) -> Result<C64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &QuantumState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `|<j|psi>|^2`.
    pub fn probability(&self, j: usize) -> Result<f64> {
        check_index(j, self.dim())?;
        Ok(self.amplitudes[j].norm_sqr())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<psi|H|psi>` for a Hamiltonian of matching dimension.
    pub fn expectation(&self, h: &crate::hamiltonian::Hamiltonian) -> Result<f64> {
        let hpsi = h.apply(&self.amplitudes)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&hpsi)
            .map(|(a, b)| (a.conj() * b).re)
            .sum())
    }
}

impl AsRef<[C64]> for QuantumState {
    fn as_ref(&self) -> &[C64] {
        &self.amplitudes
    }
}

/// All `2^n` amplitudes equal to `2^(-n/2)`.
pub fn equal_superposition(n: usize) -> Result<QuantumState> {
    if n == 0 || n > MAX_QUBITS {
        return Err(invalid(format!(
            "qubit count must be in 1..={MAX_QUBITS}, got {n}"
        )));
    }
    let dim = 1usize << n;
    let a = C64::new((dim as f64).sqrt().recip(), 0.0);
    Ok(QuantumState {
        amplitudes: vec![a; dim],
    })
}

/// `|j>` in an `N`-dimensional space.
pub fn basis_state(j: usize, dim: usize) -> Result<QuantumState> {
    check_index(j, dim)?;
    let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
    amplitudes[j] = C64::new(1.0, 0.0);
    Ok(QuantumState { amplitudes })
}
