//! Recursive 1-vs-rest Schmidt-Bloch decomposition into a binary tree of
//! Bloch spheres, and its inverse.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::register::{wrap_phase, BlochCoord, DataRegister, QubitOrder, TreeCoord};
use crate::state::{AmplitudeSource, StateBatch, StateVector};
use crate::EPS_ZERO;

/// Output of [`bloch_split`]: `r0 e^{iφ0}|0⟩ + r1 e^{iφ1}|1⟩ =
/// norm · e^{i phi_global} (cos(θ/2)|0⟩ + sin(θ/2) e^{i phi_local}|1⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitResult {
    pub norm: f64,
    pub theta: f64,
    pub phi_local: f64,
    pub phi_global: f64,
}

/// Splits a pair of polar amplitudes into a norm, a global phase and a
/// Bloch coordinate.
///
/// When one magnitude vanishes relative to the norm, the node sits on a pole:
/// the local phase is set to 0 and the surviving phase becomes the global
/// phase. Both magnitudes zero yields an all-zero placeholder.
pub fn bloch_split(r0: f64, phi0: f64, r1: f64, phi1: f64) -> SplitResult {
    let norm = r0.hypot(r1);
    if norm == 0.0 {
        return SplitResult {
            norm: 0.0,
            theta: 0.0,
            phi_local: 0.0,
            phi_global: 0.0,
        };
    }
    if r1 <= EPS_ZERO * norm {
        SplitResult {
            norm,
            theta: 0.0,
            phi_local: 0.0,
            phi_global: wrap_phase(phi0),
        }
    } else if r0 <= EPS_ZERO * norm {
        SplitResult {
            norm,
            theta: PI,
            phi_local: 0.0,
            phi_global: wrap_phase(phi1),
        }
    } else {
        SplitResult {
            norm,
            theta: 2.0 * r1.atan2(r0),
            phi_local: wrap_phase(phi1 - phi0),
            phi_global: wrap_phase(phi0),
        }
    }
}

/// Index of the amplitude in the original state that lands at `index` after
/// reordering: bit position `k` of the new index (position 0 = MSB) holds
/// original bit position `order[k]`.
fn source_index(index: usize, order: &[usize]) -> usize {
    let n = order.len();
    order.iter().enumerate().fold(0, |acc, (k, &q)| {
        let bit = (index >> (n - 1 - k)) & 1;
        acc | (bit << (n - 1 - q))
    })
}

/// Reorders qubits so that new qubit `k` is original qubit `order[k]`.
pub fn permute_qubits(state: &StateVector, order: &QubitOrder) -> Result<StateVector> {
    check_order(state.n_qubits(), order)?;
    let perm = order.as_slice();
    let amps = state.amplitudes();
    let out = (0..amps.len())
        .map(|j| amps[source_index(j, perm)])
        .collect();
    StateVector::new(out)
}

fn check_order(n_qubits: usize, order: &QubitOrder) -> Result<()> {
    if order.len() != n_qubits {
        return Err(Error::Shape(format!(
            "order has length {}, state has {n_qubits} qubits",
            order.len()
        )));
    }
    Ok(())
}

/// Lazy reordered view; reads each underlying amplitude once per read of
/// the view.
struct Permuted<'a, S> {
    inner: &'a S,
    order: &'a [usize],
}

impl<S: AmplitudeSource> AmplitudeSource for Permuted<'_, S> {
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    fn amplitude(&self, index: usize) -> Complex64 {
        self.inner.amplitude(source_index(index, self.order))
    }
}

/// Decomposes every sample of `batch` with the given Schmidt qubit order.
pub fn decompose(batch: &StateBatch, order: &QubitOrder) -> Result<DataRegister> {
    decompose_sources(batch.states(), order)
}

/// Decomposes arbitrary amplitude sources.
///
/// Each amplitude of each sample is read exactly once. Samples must share
/// a qubit count and have norm above the zero threshold.
pub fn decompose_sources<S: AmplitudeSource>(
    samples: &[S],
    order: &QubitOrder,
) -> Result<DataRegister> {
    let first = samples
        .first()
        .ok_or_else(|| Error::Shape("batch must contain at least one state".into()))?;
    let n = first.n_qubits();
    if n == 0 {
        return Err(Error::Shape("states need at least one qubit".into()));
    }
    if let Some(i) = samples.iter().position(|s| s.n_qubits() != n) {
        return Err(Error::Shape(format!(
            "sample {i} has {} qubits, expected {n}",
            samples[i].n_qubits()
        )));
    }
    check_order(n, order)?;

    let mut reg = DataRegister::blank(n, samples.len(), order.clone());
    for (i, s) in samples.iter().enumerate() {
        let view = Permuted {
            inner: s,
            order: order.as_slice(),
        };
        let (norm, _) = descend(&view, 0, n, 1, &mut reg, i);
        if norm <= EPS_ZERO {
            return Err(Error::ZeroState { sample: i, norm });
        }
    }
    Ok(reg)
}

/// Decomposes the `2^level` amplitudes starting at `offset` into node `heap`
/// and its subtree; returns the subtree's (norm, global phase).
fn descend<S: AmplitudeSource>(
    src: &S,
    offset: usize,
    level: usize,
    heap: usize,
    reg: &mut DataRegister,
    sample: usize,
) -> (f64, f64) {
    let (r0, phi0, r1, phi1) = if level == 1 {
        let a0 = src.amplitude(offset);
        let a1 = src.amplitude(offset + 1);
        (a0.norm(), a0.arg(), a1.norm(), a1.arg())
    } else {
        let half = 1usize << (level - 1);
        let (r0, phi0) = descend(src, offset, level - 1, 2 * heap, reg, sample);
        let (r1, phi1) = descend(src, offset + half, level - 1, 2 * heap + 1, reg, sample);
        let norm = r0.hypot(r1);
        if r0 <= EPS_ZERO * norm || norm == 0.0 {
            reg.copy_subtree(2 * heap + 1, 2 * heap, sample);
        } else if r1 <= EPS_ZERO * norm {
            reg.copy_subtree(2 * heap, 2 * heap + 1, sample);
        }
        (r0, phi0, r1, phi1)
    };
    let split = bloch_split(r0, phi0, r1, phi1);
    reg.set(
        heap,
        sample,
        BlochCoord {
            theta: split.theta,
            phi: split.phi_local,
        },
    );
    (split.norm, split.phi_global)
}

/// Rebuilds unit-norm states from a register, undoing its qubit order.
///
/// The result has zero accumulated global phase along the tree, so it
/// matches the original input up to norm and global phase.
pub fn reconstruct(register: &DataRegister) -> Result<StateBatch> {
    let n = register.n_qubits();
    let inverse = register.order().inverse();
    let states = (0..register.n_samples())
        .map(|sample| {
            let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
            ascend(
                register,
                1,
                n,
                0,
                Complex64::new(1.0, 0.0),
                sample,
                &mut amps,
            );
            let tree_ordered = StateVector::new(amps)?;
            if inverse.is_identity() {
                Ok(tree_ordered)
            } else {
                permute_qubits(&tree_ordered, &inverse)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    StateBatch::new(states)
}

fn ascend(
    reg: &DataRegister,
    heap: usize,
    level: usize,
    offset: usize,
    weight: Complex64,
    sample: usize,
    out: &mut [Complex64],
) {
    let c = reg.by_heap(heap)[sample];
    let (s, co) = (c.theta / 2.0).sin_cos();
    let w0 = weight * co;
    let w1 = weight * Complex64::from_polar(s, c.phi);
    if level == 1 {
        out[offset] = w0;
        out[offset + 1] = w1;
    } else {
        let half = 1usize << (level - 1);
        ascend(reg, 2 * heap, level - 1, offset, w0, sample, out);
        ascend(reg, 2 * heap + 1, level - 1, offset + half, w1, sample, out);
    }
}

/// Largest difference between mirrored descendants of `coord`'s two
/// children, per sample.
pub fn subtree_mismatch(register: &DataRegister, coord: &TreeCoord) -> Result<Vec<f64>> {
    register.node(coord)?;
    if coord.depth() + 1 >= register.n_qubits() {
        return Err(Error::NotInternal(coord.as_str().to_owned()));
    }
    let heap = coord.heap_index();
    let n_nodes = register.n_nodes();
    let out = (0..register.n_samples())
        .map(|sample| {
            let mut worst = 0.0f64;
            let (mut left, mut right, mut width) = (2 * heap, 2 * heap + 1, 1usize);
            while left <= n_nodes {
                for k in 0..width {
                    let a = register.by_heap(left + k)[sample];
                    let b = register.by_heap(right + k)[sample];
                    worst = worst.max(a.distance(b));
                }
                left <<= 1;
                right <<= 1;
                width <<= 1;
            }
            worst
        })
        .collect();
    Ok(out)
}

/// Per sample: whether the two subtrees under `coord` agree within `tol`
/// in every θ and (circular) φ, i.e. the state factorizes at that node.
pub fn is_product_at(register: &DataRegister, coord: &TreeCoord, tol: f64) -> Result<Vec<bool>> {
    Ok(subtree_mismatch(register, coord)?
        .into_iter()
        .map(|d| d <= tol)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn split_basis_zero() {
        let s = bloch_split(1.0, 0.0, 0.0, 0.0);
        assert_eq!(
            s,
            SplitResult {
                norm: 1.0,
                theta: 0.0,
                phi_local: 0.0,
                phi_global: 0.0
            }
        );
    }

    #[test]
    fn split_plus_i() {
        let s = bloch_split(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, FRAC_PI_2);
        assert!(close(s.norm, 1.0, 1e-15));
        assert!(close(s.theta, FRAC_PI_2, 1e-15));
        assert_eq!(s.phi_global, 0.0);
        assert!(close(s.phi_local, FRAC_PI_2, 1e-15));
    }

    #[test]
    fn split_south_pole_keeps_surviving_phase() {
        let s = bloch_split(0.0, 0.7, 2.0, FRAC_PI_3);
        assert_eq!(s.norm, 2.0);
        assert_eq!(s.theta, PI);
        assert_eq!(s.phi_global, FRAC_PI_3);
        assert_eq!(s.phi_local, 0.0);
    }

    #[test]
    fn split_generic_recombines() {
        let s = bloch_split(0.6, 0.3, 0.8, 1.1);
        assert!(close(s.norm, 1.0, 1e-15));
        // 2·atan2(0.8, 0.6)
        assert!(close(s.theta, 1.854_590_436_003_601_4, 1e-12));
        assert!(close(s.phi_global, 0.3, 1e-15));
        assert!(close(s.phi_local, 0.8, 1e-15));
        let a0 = Complex64::from_polar(s.norm, s.phi_global) * (s.theta / 2.0).cos();
        let a1 = Complex64::from_polar(s.norm, s.phi_global)
            * Complex64::from_polar((s.theta / 2.0).sin(), s.phi_local);
        assert!((a0 - Complex64::from_polar(0.6, 0.3)).norm() < 1e-12);
        assert!((a1 - Complex64::from_polar(0.8, 1.1)).norm() < 1e-12);
    }

    #[test]
    fn split_dead_branch() {
        let s = bloch_split(0.0, 1.0, 0.0, 2.0);
        assert_eq!(s.norm, 0.0);
        assert_eq!((s.theta, s.phi_local, s.phi_global), (0.0, 0.0, 0.0));
    }

    #[test]
    fn split_negative_phase_wraps() {
        let s = bloch_split(1.0, -FRAC_PI_2, 1.0, 0.0);
        assert!(close(s.phi_global, 1.5 * PI, 1e-15));
        assert!(close(s.phi_local, FRAC_PI_2, 1e-15));
    }

    #[test]
    fn decompose_basis_state_copies_sibling() {
        let batch = StateBatch::single(StateVector::basis(2, 0).unwrap());
        let reg = decompose(&batch, &QubitOrder::identity(2)).unwrap();
        for b in ["", "0", "1"] {
            assert_eq!(reg.at(b, 0), BlochCoord::NORTH, "node {b:?}");
        }
    }

    #[test]
    fn decompose_basis_state_copies_left_into_right() {
        // |10⟩: root on the south pole, "1" subtree holds |0⟩, "0" must copy it
        let batch = StateBatch::single(StateVector::basis(3, 0b110).unwrap());
        let reg = decompose(&batch, &QubitOrder::identity(3)).unwrap();
        assert_eq!(reg.at("", 0).theta, PI);
        assert_eq!(reg.at("1", 0).theta, PI);
        assert_eq!(reg.at("11", 0).theta, 0.0);
        for (l, r) in [("0", "1"), ("00", "10"), ("01", "11")] {
            assert_eq!(reg.at(l, 0), reg.at(r, 0));
        }
    }

    #[test]
    fn decompose_bell() {
        let s = StateVector::new(vec![
            c(FRAC_1_SQRT_2, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        let reg = decompose(&StateBatch::single(s), &QubitOrder::identity(2)).unwrap();
        let root = reg.at("", 0);
        assert!(close(root.theta, FRAC_PI_2, 1e-15) && root.phi == 0.0);
        assert_eq!(reg.at("0", 0), BlochCoord::NORTH);
        assert_eq!(
            reg.at("1", 0),
            BlochCoord {
                theta: PI,
                phi: 0.0
            }
        );
    }

    #[test]
    fn decompose_plus_plus() {
        let s = StateVector::from_real(&[0.5; 4]).unwrap();
        let reg = decompose(&StateBatch::single(s), &QubitOrder::identity(2)).unwrap();
        for b in ["", "0", "1"] {
            let x = reg.at(b, 0);
            assert!(close(x.theta, FRAC_PI_2, 1e-15) && x.phi == 0.0);
        }
        assert_eq!(
            is_product_at(&reg, &TreeCoord::root(), 1e-12).unwrap(),
            vec![true]
        );
    }

    #[test]
    fn reconstruct_bell_register() {
        let recs = vec![
            (
                TreeCoord::root(),
                vec![BlochCoord {
                    theta: FRAC_PI_2,
                    phi: 0.0,
                }],
            ),
            (TreeCoord::new("0").unwrap(), vec![BlochCoord::NORTH]),
            (
                TreeCoord::new("1").unwrap(),
                vec![BlochCoord {
                    theta: PI,
                    phi: 0.0,
                }],
            ),
        ];
        let reg = DataRegister::from_nodes(2, QubitOrder::identity(2), recs).unwrap();
        let out = reconstruct(&reg).unwrap();
        let amps = out.states()[0].amplitudes();
        let expect = [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2];
        for (a, e) in amps.iter().zip(expect) {
            assert!((a - c(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn reconstruct_all_north_is_ground_state() {
        let reg = DataRegister::blank(2, 1, QubitOrder::identity(2));
        let out = reconstruct(&reg).unwrap();
        assert_eq!(out.states()[0], StateVector::basis(2, 0).unwrap());
    }

    #[test]
    fn permute_examples() {
        let s = StateVector::basis(3, 0b101).unwrap();
        assert_eq!(permute_qubits(&s, &QubitOrder::identity(3)).unwrap(), s);

        let swap: QubitOrder = "1,0".parse().unwrap();
        let s01 = StateVector::basis(2, 0b01).unwrap();
        assert_eq!(
            permute_qubits(&s01, &swap).unwrap(),
            StateVector::basis(2, 0b10).unwrap()
        );

        let err = permute_qubits(&s01, &QubitOrder::identity(3)).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
    }

    #[test]
    fn permute_matches_bit_enumeration() {
        // brute force over the 8 basis states: new bit k = old bit order[k]
        let order: QubitOrder = "2,0,1".parse().unwrap();
        let bits = |i: usize| [(i >> 2) & 1, (i >> 1) & 1, i & 1];
        for old in 0..8 {
            let ob = bits(old);
            let new = (ob[2] << 2) | (ob[0] << 1) | ob[1];
            let s = StateVector::basis(3, old).unwrap();
            assert_eq!(
                permute_qubits(&s, &order).unwrap(),
                StateVector::basis(3, new).unwrap()
            );
        }
        let moved = permute_qubits(&StateVector::basis(3, 0b011).unwrap(), &order).unwrap();
        assert_eq!(moved, StateVector::basis(3, 0b101).unwrap());
    }

    #[test]
    fn product_check_rejects_leaf_and_unknown() {
        let reg = DataRegister::blank(2, 1, QubitOrder::identity(2));
        assert!(matches!(
            is_product_at(&reg, &TreeCoord::new("0").unwrap(), 1e-9),
            Err(Error::NotInternal(_))
        ));
        assert!(matches!(
            is_product_at(&reg, &TreeCoord::new("000").unwrap(), 1e-9),
            Err(Error::UnknownCoord(_))
        ));
        let one = DataRegister::blank(1, 1, QubitOrder::identity(1));
        assert!(is_product_at(&one, &TreeCoord::root(), 1e-9).is_err());
    }

    #[test]
    fn bell_is_not_product() {
        let s = StateVector::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let reg = decompose(&StateBatch::single(s), &QubitOrder::identity(2)).unwrap();
        assert_eq!(
            is_product_at(&reg, &TreeCoord::root(), 1e-6).unwrap(),
            vec![false]
        );
    }

    #[test]
    fn decompose_rejects_mismatched_order() {
        let batch = StateBatch::single(StateVector::basis(2, 0).unwrap());
        assert!(matches!(
            decompose(&batch, &QubitOrder::identity(3)),
            Err(Error::Shape(_))
        ));
    }
}
