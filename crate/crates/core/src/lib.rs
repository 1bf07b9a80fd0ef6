//! Binary Tree of Bloch Spheres (BTBS).
//!
//! Any pure multi-qubit state can be written, up to norm and global phase, as
//! a binary tree of single-qubit Bloch coordinates: split off one qubit with a
//! Schmidt-style decomposition, record the Bloch angles of the split, and
//! recurse on the two conditional states of the remaining qubits.
//!
//! ```
//! use btbs_core::{decompose, reconstruct, QubitOrder, StateBatch, StateVector};
//!
//! let bell = StateVector::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
//! let batch = StateBatch::single(bell.clone());
//! let register = decompose(&batch, &QubitOrder::identity(2)).unwrap();
//! assert_eq!(register.n_nodes(), 3);
//! let back = reconstruct(&register).unwrap();
//! assert!((back.states()[0].fidelity(&bell) - 1.0).abs() < 1e-12);
//! ```

pub mod decompose;
pub mod error;
pub mod generate;
pub mod io;
pub mod register;
pub mod render;
pub mod state;

pub use decompose::{
    bloch_split, decompose, decompose_sources, is_product_at, permute_qubits, reconstruct,
    subtree_mismatch, SplitResult,
};
pub use error::{Error, Result};
pub use generate::{
    amplitude_encode, angle_encode, bell_circuit_state, eigendecompose, evolve, random_hermitian,
    superpose_eigenstates, HermitianMatrix, SpectralDecomposition,
};
pub use io::{export_register, export_states, parse_register, parse_states, Format};
pub use register::{BlochCoord, DataRegister, QubitOrder, TreeCoord};
pub use render::{render_svg, RenderSpec};
pub use state::{AmplitudeSource, StateBatch, StateVector};

pub use num_complex::Complex64;

/// Relative magnitude below which a branch counts as zero: a node whose
/// child norm is at most `EPS_ZERO` times its own norm sits on a pole.
pub const EPS_ZERO: f64 = 1e-12;
