//! State batches for the application demos: a parameterized Bell circuit,
//! Hamiltonian time evolution, amplitude encoding and angle encoding.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::state::{StateBatch, StateVector};

const HERMITIAN_TOL: f64 = 1e-14;
const ORTHO_TOL: f64 = 1e-10;
const RESIDUAL_TOL: f64 = 1e-8;
const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// `CRY(πt) · (H ⊗ I) |00⟩` with qubit 0 as control.
///
/// `t = 0` gives `|+⟩|0⟩`, `t = 1` gives `(|00⟩ + |11⟩)/√2`.
pub fn bell_circuit_state(t: f64) -> Result<StateVector> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [0, 1]")));
    }
    let (s, c) = (PI * t / 2.0).sin_cos();
    StateVector::from_real(&[FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2 * c, FRAC_1_SQRT_2 * s])
}

/// Bell circuit states at `steps` evenly spaced `t` in `[0, 1]`.
pub fn bell_sweep(steps: usize) -> Result<StateBatch> {
    let states = linspace(0.0, 1.0, steps)?
        .into_iter()
        .map(|t| bell_circuit_state(t.clamp(0.0, 1.0)))
        .collect::<Result<Vec<_>>>()?;
    StateBatch::new(states)
}

/// `steps` evenly spaced points from `start` to `end` inclusive; a single
/// step yields `[start]`.
pub fn linspace(start: f64, end: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::Domain("need at least one step".into()));
    }
    if !start.is_finite() || !end.is_finite() {
        return Err(Error::Domain("range endpoints must be finite".into()));
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| start + (end - start) * (i as f64 / last))
        .collect())
}

/// A dense Hermitian operator on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Wraps a square matrix, checking `H[i][j] = conj(H[j][i])`.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() || crate::state::qubits_for_len(entries.nrows()).is_err() {
            return Err(Error::Shape(format!(
                "expected a 2^N x 2^N matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let dim = entries.nrows();
        for i in 0..dim {
            for j in 0..=i {
                if (entries[(i, j)] - entries[(j, i)].conj()).norm() > HERMITIAN_TOL {
                    return Err(Error::Domain(format!(
                        "matrix is not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(HermitianMatrix { entries })
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let d = values.iter().map(|&v| Complex64::new(v, 0.0));
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            values.len(),
            d,
        )))
    }

    /// Row-major construction from real entries.
    pub fn from_real_rows(dim: usize, values: &[f64]) -> Result<Self> {
        if values.len() != dim * dim {
            return Err(Error::Shape(format!("expected {} entries", dim * dim)));
        }
        let data = values.iter().map(|&v| Complex64::new(v, 0.0));
        Self::new(DMatrix::from_row_iterator(dim, dim, data))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.entries[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `⟨ψ|H|ψ⟩` for a unit-norm `ψ`.
    pub fn expectation(&self, psi: &StateVector) -> f64 {
        let hv = self.apply(psi.amplitudes());
        psi.amplitudes()
            .iter()
            .zip(&hv)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .re
    }
}

/// `H = (A + A†)/2` where `A` has i.i.d. standard complex Gaussian entries
/// (real and imaginary parts `N(0, 1/2)`), drawn row-major from a ChaCha8
/// stream seeded with `seed`.
pub fn random_hermitian(n_qubits: usize, seed: u64) -> Result<HermitianMatrix> {
    if n_qubits == 0 || n_qubits > 14 {
        return Err(Error::Domain(format!("unsupported qubit count {n_qubits}")));
    }
    let dim = 1usize << n_qubits;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::<Complex64>::from_fn(dim, dim, |_, _| complex_gaussian(&mut rng));
    // from_fn fills column-major; transpose so the draw order is row-major
    let a = a.transpose();
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..dim {
            let z = (a[(i, j)] + a[(j, i)].conj()) / 2.0;
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    HermitianMatrix::new(h)
}

fn complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<StateVector>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[StateVector] {
        &self.eigenvectors
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.eigenvectors[0].n_qubits()
    }
}

/// Hermitian eigendecomposition, checked against the residual bound
/// `‖Hv − λv‖ ≤ 1e−8·‖H‖` and `|⟨v_j|v_k⟩ − δ_jk| ≤ 1e−10`.
pub fn eigendecompose(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let eig = h
        .entries
        .clone()
        .try_symmetric_eigen(EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or_else(|| {
            Error::Convergence(format!("no convergence after {EIGEN_MAX_ITER} sweeps"))
        })?;
    let dim = h.dim();
    let mut idx: Vec<usize> = (0..dim).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let eigenvalues: Vec<f64> = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = idx
        .iter()
        .map(|&k| StateVector::new(eig.eigenvectors.column(k).iter().copied().collect()))
        .collect::<Result<Vec<_>>>()?;

    let scale = h.norm().max(f64::MIN_POSITIVE);
    for (k, (lambda, v)) in eigenvalues.iter().zip(&eigenvectors).enumerate() {
        let hv = h.apply(v.amplitudes());
        let residual = hv
            .iter()
            .zip(v.amplitudes())
            .map(|(a, b)| (a - b * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual > RESIDUAL_TOL * scale {
            return Err(Error::Convergence(format!(
                "eigenpair {k} residual {residual:e} exceeds bound"
            )));
        }
    }
    for (j, vj) in eigenvectors.iter().enumerate() {
        for (k, vk) in eigenvectors.iter().enumerate().skip(j) {
            let target = if j == k { 1.0 } else { 0.0 };
            if (vj.inner(vk) - target).norm() > ORTHO_TOL {
                return Err(Error::Convergence(format!(
                    "eigenvectors {j} and {k} are not orthonormal"
                )));
            }
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// `normalize(Σ_k coeffs[k] |v_{indices[k]}⟩)`.
pub fn superpose_eigenstates(
    spectrum: &SpectralDecomposition,
    indices: &[usize],
    coeffs: &[Complex64],
) -> Result<StateVector> {
    if indices.is_empty() || indices.len() != coeffs.len() {
        return Err(Error::Domain(format!(
            "got {} indices and {} coefficients",
            indices.len(),
            coeffs.len()
        )));
    }
    let mut seen = vec![false; spectrum.len()];
    for &k in indices {
        if k >= spectrum.len() {
            return Err(Error::Domain(format!("eigenstate index {k} out of range")));
        }
        if std::mem::replace(&mut seen[k], true) {
            return Err(Error::Domain(format!("eigenstate index {k} repeated")));
        }
    }
    if coeffs.iter().all(|c| c.norm() == 0.0) {
        return Err(Error::Domain("all coefficients are zero".into()));
    }
    let dim = spectrum.eigenvectors[0].len();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (&k, &c) in indices.iter().zip(coeffs) {
        for (a, v) in amps.iter_mut().zip(spectrum.eigenvectors[k].amplitudes()) {
            *a += c * v;
        }
    }
    Ok(StateVector::new(amps)?.normalized())
}

/// `ψ(t) = Σ_k ⟨v_k|ψ0⟩ e^{−iλ_k t} |v_k⟩` for each `t`, in order.
pub fn evolve(
    spectrum: &SpectralDecomposition,
    psi0: &StateVector,
    times: &[f64],
) -> Result<StateBatch> {
    if psi0.len() != spectrum.eigenvectors[0].len() {
        return Err(Error::Shape(format!(
            "initial state has {} amplitudes, operator has dimension {}",
            psi0.len(),
            spectrum.eigenvectors[0].len()
        )));
    }
    if (psi0.norm() - 1.0).abs() > 1e-8 {
        return Err(Error::Domain(format!(
            "initial state norm {} is not 1",
            psi0.norm()
        )));
    }
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(Error::Domain(format!("time {t} is not finite")));
    }
    let overlaps: Vec<Complex64> = spectrum
        .eigenvectors
        .iter()
        .map(|v| v.inner(psi0))
        .collect();
    let dim = psi0.len();
    let states = times
        .iter()
        .map(|&t| {
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            for ((v, &c), &lambda) in spectrum
                .eigenvectors
                .iter()
                .zip(&overlaps)
                .zip(&spectrum.eigenvalues)
            {
                let w = c * Complex64::from_polar(1.0, -lambda * t);
                for (a, x) in amps.iter_mut().zip(v.amplitudes()) {
                    *a += w * x;
                }
            }
            StateVector::new(amps)
        })
        .collect::<Result<Vec<_>>>()?;
    StateBatch::new(states)
}

/// `|ψ⟩ = Σ_k u_k/‖u‖ |k⟩`.
pub fn amplitude_encode(u: &[f64]) -> Result<StateVector> {
    crate::state::qubits_for_len(u.len())?;
    if u.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("non-finite entry in amplitude vector".into()));
    }
    let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroState { sample: 0, norm });
    }
    StateVector::from_real(&u.iter().map(|x| x / norm).collect::<Vec<_>>())
}

/// Amplitude encodings of `base` with entry `index` swept linearly from 0 to 1.
pub fn amplitude_sweep(base: &[f64], index: usize, steps: usize) -> Result<StateBatch> {
    if index >= base.len() {
        return Err(Error::Domain(format!("sweep index {index} out of range")));
    }
    let states = linspace(0.0, 1.0, steps)?
        .into_iter()
        .map(|x| {
            let mut u = base.to_vec();
            u[index] = x;
            amplitude_encode(&u)
        })
        .collect::<Result<Vec<_>>>()?;
    StateBatch::new(states)
}

/// `⊗_i (cos(x_i/2)|0⟩ + sin(x_i/2)|1⟩)`, feature 0 on qubit 0.
pub fn angle_encode(features: &[f64]) -> Result<StateVector> {
    if features.is_empty() {
        return Err(Error::Shape("need at least one feature".into()));
    }
    if features.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("non-finite feature".into()));
    }
    let mut amps = vec![1.0f64];
    for &x in features {
        let (s, c) = (x / 2.0).sin_cos();
        amps = amps.iter().flat_map(|&a| [a * c, a * s]).collect();
    }
    StateVector::from_real(&amps)
}

/// Uniform vector in `[0, 1]^len` from a seeded ChaCha8 stream.
pub fn random_unit_interval_vector(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random::<f64>()).collect()
}

/// Synthetic 4-feature, two-class data: the first half of the samples
/// clusters around angle 0.8, the second around 2.3 (radians), with
/// uniform jitter of ±0.4.
pub fn synthetic_features(n_samples: usize, seed: u64) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_samples)
        .map(|i| {
            let center = if i < n_samples.div_ceil(2) { 0.8 } else { 2.3 };
            std::array::from_fn(|_| center + rng.random_range(-0.4..0.4))
        })
        .collect()
}
