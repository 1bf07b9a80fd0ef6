//! Pure-state containers.
//!
//! Basis indices are big-endian in qubit order: qubit 0 is the most
//! significant bit, so the first half of a state vector is the block where
//! qubit 0 is `|0⟩`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::EPS_ZERO;

/// Read access to the amplitudes of one sample.
///
/// [`crate::decompose_sources`] reads through this trait only, which lets
/// callers wrap a state to observe how often each amplitude is queried.
pub trait AmplitudeSource {
    fn n_qubits(&self) -> usize;
    fn amplitude(&self, index: usize) -> Complex64;
}

/// A pure state on `n_qubits` qubits, stored as `2^n_qubits` amplitudes.
///
/// Need not be normalized, but is always finite and non-zero.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    n_qubits: usize,
}

/// Number of qubits for a vector of `len` amplitudes, if `len` is a power of two ≥ 2.
pub fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::Shape(format!(
            "amplitude count {len} is not a power of two >= 2"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        if let Some(i) = amplitudes
            .iter()
            .position(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::Domain(format!("amplitude {i} is not finite")));
        }
        let state = StateVector {
            amplitudes,
            n_qubits,
        };
        let norm = state.norm();
        if norm <= EPS_ZERO {
            return Err(Error::ZeroState { sample: 0, norm });
        }
        Ok(state)
    }

    /// Builds a state from real amplitudes.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let len = 1usize
            .checked_shl(n_qubits as u32)
            .filter(|_| n_qubits >= 1)
            .ok_or_else(|| Error::Shape(format!("invalid qubit count {n_qubits}")))?;
        if index >= len {
            return Err(Error::Shape(format!("basis index {index} out of range")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); len];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self::new(amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalized(&self) -> Self {
        let norm = self.norm();
        StateVector {
            amplitudes: self.amplitudes.iter().map(|a| a / norm).collect(),
            n_qubits: self.n_qubits,
        }
    }

    /// Multiplies every amplitude by `c` (must be non-zero).
    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        Self::new(self.amplitudes.iter().map(|a| a * c).collect())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|` of the normalized states; 1 means equal up to global phase.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm() / (self.norm() * other.norm())
    }

    /// Tensor product `self ⊗ other`; `self` supplies the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        StateVector {
            amplitudes,
            n_qubits: self.n_qubits + other.n_qubits,
        }
    }
}

impl AmplitudeSource for StateVector {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }
}

/// `M ≥ 1` samples sharing one qubit count.
#[derive(Debug, Clone, PartialEq)]
pub struct StateBatch {
    states: Vec<StateVector>,
}

impl StateBatch {
    pub fn new(states: Vec<StateVector>) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::Shape("batch must contain at least one state".into()))?;
        let n = first.n_qubits();
        if let Some(i) = states.iter().position(|s| s.n_qubits() != n) {
            return Err(Error::Shape(format!(
                "sample {i} has {} qubits, expected {n}",
                states[i].n_qubits()
            )));
        }
        Ok(StateBatch { states })
    }

    /// Validates raw amplitude vectors, reporting the offending sample index.
    pub fn from_amplitudes(samples: Vec<Vec<Complex64>>) -> Result<Self> {
        let states = samples
            .into_iter()
            .enumerate()
            .map(|(i, amps)| {
                StateVector::new(amps).map_err(|e| match e {
                    Error::ZeroState { norm, .. } => Error::ZeroState { sample: i, norm },
                    Error::Shape(m) => Error::Shape(format!("sample {i}: {m}")),
                    Error::Domain(m) => Error::Domain(format!("sample {i}: {m}")),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(states)
    }

    pub fn single(state: StateVector) -> Self {
        StateBatch {
            states: vec![state],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.states[0].n_qubits()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn iter(&self) -> std::slice::Iter<'_, StateVector> {
        self.states.iter()
    }

    pub fn into_states(self) -> Vec<StateVector> {
        self.states
    }
}

impl<'a> IntoIterator for &'a StateBatch {
    type Item = &'a StateVector;
    type IntoIter = std::slice::Iter<'a, StateVector>;

    fn into_iter(self) -> Self::IntoIter {
        self.states.iter()
    }
}
