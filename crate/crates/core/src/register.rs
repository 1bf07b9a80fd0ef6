//! The data register produced by decomposition: one Bloch coordinate per
//! tree node per sample.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::EPS_ZERO;

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid rounds tiny negative inputs up to exactly 2π
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Distance between two angles measured on the circle, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = wrap_phase(a - b);
    d.min(TAU - d)
}

/// Polar angle `theta ∈ [0, π]` and azimuth `phi ∈ [0, 2π)` of one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochCoord {
    pub theta: f64,
    pub phi: f64,
}

impl BlochCoord {
    pub const NORTH: BlochCoord = BlochCoord {
        theta: 0.0,
        phi: 0.0,
    };

    /// Checked constructor. Poles must carry `phi == 0`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::Invariant(format!(
                "non-finite angle ({theta}, {phi})"
            )));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Invariant(format!("theta {theta} outside [0, pi]")));
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::Invariant(format!("phi {phi} outside [0, 2pi)")));
        }
        if (theta <= EPS_ZERO || PI - theta <= EPS_ZERO) && phi != 0.0 {
            return Err(Error::Invariant(format!(
                "theta {theta} is at a pole but phi is {phi}, expected 0"
            )));
        }
        Ok(BlochCoord { theta, phi })
    }

    /// Cartesian point `(sin θ cos φ, sin θ sin φ, cos θ)` on the unit sphere.
    pub fn to_cartesian(self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Largest of the theta difference and the circular phi difference.
    pub fn distance(self, other: BlochCoord) -> f64 {
        (self.theta - other.theta)
            .abs()
            .max(circular_distance(self.phi, other.phi))
    }
}

/// Position of a node in the binary tree: a string of `'0'`/`'1'`, empty at the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeCoord(String);

impl TreeCoord {
    pub fn root() -> Self {
        TreeCoord(String::new())
    }

    pub fn new(bits: &str) -> Result<Self> {
        if let Some(c) = bits.chars().find(|&c| c != '0' && c != '1') {
            return Err(Error::UnknownCoord(format!("{bits} (bad character {c:?})")));
        }
        Ok(TreeCoord(bits.to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn child(&self, bit: u8) -> Self {
        let mut s = self.0.clone();
        s.push(if bit == 0 { '0' } else { '1' });
        TreeCoord(s)
    }

    /// 1-based heap index: root is 1, children of `k` are `2k` and `2k + 1`.
    pub fn heap_index(&self) -> usize {
        self.0
            .bytes()
            .fold(1usize, |acc, b| (acc << 1) | usize::from(b == b'1'))
    }

    pub fn from_heap_index(heap: usize) -> Self {
        assert!(heap >= 1, "heap index starts at 1");
        let depth = (usize::BITS - 1 - heap.leading_zeros()) as usize;
        let bits = (0..depth)
            .map(|k| {
                if (heap >> (depth - 1 - k)) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        TreeCoord(bits)
    }
}

impl fmt::Display for TreeCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for TreeCoord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TreeCoord::new(s)
    }
}

/// Order in which qubits are split off: `perm[k]` is the original qubit
/// placed at tree depth `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QubitOrder(Vec<usize>);

impl QubitOrder {
    pub fn identity(n_qubits: usize) -> Self {
        QubitOrder((0..n_qubits).collect())
    }

    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &q in &perm {
            if q >= n {
                return Err(Error::Shape(format!(
                    "qubit {q} out of range for order of length {n}"
                )));
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::Shape(format!("qubit {q} repeated in order")));
            }
        }
        Ok(QubitOrder(perm))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &q)| k == q)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (k, &q) in self.0.iter().enumerate() {
            inv[q] = k;
        }
        QubitOrder(inv)
    }
}

impl FromStr for QubitOrder {
    type Err = Error;

    /// Parses a comma-separated list such as `"2,0,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let perm = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Shape(format!("bad qubit index {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        QubitOrder::new(perm)
    }
}

/// Decomposition output: for every tree node, the Bloch coordinate of each sample.
///
/// Nodes are stored in heap order, which coincides with sorting by
/// `(depth, lexicographic coord)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataRegister {
    n_qubits: usize,
    n_samples: usize,
    order: QubitOrder,
    nodes: Vec<Vec<BlochCoord>>,
}

impl DataRegister {
    pub(crate) fn blank(n_qubits: usize, n_samples: usize, order: QubitOrder) -> Self {
        let n_nodes = (1usize << n_qubits) - 1;
        DataRegister {
            n_qubits,
            n_samples,
            order,
            nodes: vec![vec![BlochCoord::NORTH; n_samples]; n_nodes],
        }
    }

    /// Builds a register from explicit node records, checking that the node
    /// set is exactly the complete tree and every coordinate is in range.
    pub fn from_nodes<I>(n_qubits: usize, order: QubitOrder, records: I) -> Result<Self>
    where
        I: IntoIterator<Item = (TreeCoord, Vec<BlochCoord>)>,
    {
        if n_qubits == 0 || n_qubits >= usize::BITS as usize - 1 {
            return Err(Error::Invariant(format!("invalid qubit count {n_qubits}")));
        }
        if order.len() != n_qubits {
            return Err(Error::Invariant(format!(
                "order has length {}, expected {n_qubits}",
                order.len()
            )));
        }
        let n_nodes = (1usize << n_qubits) - 1;
        let mut slots: Vec<Option<Vec<BlochCoord>>> = vec![None; n_nodes];
        let mut n_samples = None;
        for (coord, coords) in records {
            if coord.depth() >= n_qubits {
                return Err(Error::Invariant(format!(
                    "coord {coord:?} too deep for {n_qubits} qubits"
                )));
            }
            let m = *n_samples.get_or_insert(coords.len());
            if coords.len() != m {
                return Err(Error::Invariant(format!(
                    "node {coord:?} has {} samples, expected {m}",
                    coords.len()
                )));
            }
            for c in &coords {
                BlochCoord::new(c.theta, c.phi)
                    .map_err(|e| Error::Invariant(format!("node {coord:?}: {e}")))?;
            }
            let slot = &mut slots[coord.heap_index() - 1];
            if slot.replace(coords).is_some() {
                return Err(Error::Invariant(format!("duplicate node {coord:?}")));
            }
        }
        let n_samples = n_samples.unwrap_or(0);
        if n_samples == 0 {
            return Err(Error::Invariant("register has no samples".into()));
        }
        let nodes = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| {
                    Error::Invariant(format!(
                        "missing node {:?}",
                        TreeCoord::from_heap_index(i + 1).as_str()
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DataRegister {
            n_qubits,
            n_samples,
            order,
            nodes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn order(&self) -> &QubitOrder {
        &self.order
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains(&self, coord: &TreeCoord) -> bool {
        coord.depth() < self.n_qubits
    }

    pub fn get(&self, coord: &TreeCoord) -> Option<&[BlochCoord]> {
        self.contains(coord)
            .then(|| self.nodes[coord.heap_index() - 1].as_slice())
    }

    pub fn node(&self, coord: &TreeCoord) -> Result<&[BlochCoord]> {
        self.get(coord)
            .ok_or_else(|| Error::UnknownCoord(coord.as_str().to_owned()))
    }

    /// Convenience lookup by bit string; panics on unknown coordinates.
    pub fn at(&self, bits: &str, sample: usize) -> BlochCoord {
        let coord = TreeCoord::new(bits).expect("valid coord");
        self.node(&coord).expect("coord in register")[sample]
    }

    /// Node records in canonical `(depth, lexicographic)` order.
    pub fn iter(&self) -> impl Iterator<Item = (TreeCoord, &[BlochCoord])> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, v)| (TreeCoord::from_heap_index(i + 1), v.as_slice()))
    }

    pub(crate) fn by_heap(&self, heap: usize) -> &[BlochCoord] {
        &self.nodes[heap - 1]
    }

    pub(crate) fn set(&mut self, heap: usize, sample: usize, coord: BlochCoord) {
        self.nodes[heap - 1][sample] = coord;
    }

    /// Copies every descendant entry of heap node `from` onto the mirrored
    /// descendant of heap node `to` (same depth), for one sample.
    pub(crate) fn copy_subtree(&mut self, from: usize, to: usize, sample: usize) {
        let mut from_lo = from;
        let mut to_lo = to;
        let mut width = 1usize;
        while from_lo <= self.nodes.len() {
            for k in 0..width {
                let c = self.nodes[from_lo + k - 1][sample];
                self.nodes[to_lo + k - 1][sample] = c;
            }
            from_lo <<= 1;
            to_lo <<= 1;
            width <<= 1;
        }
    }

    /// Largest per-node coordinate difference against `other` (see
    /// [`BlochCoord::distance`]), or `None` if the shapes differ.
    pub fn max_distance(&self, other: &DataRegister) -> Option<f64> {
        if self.n_qubits != other.n_qubits || self.n_samples != other.n_samples {
            return None;
        }
        let d = self
            .nodes
            .iter()
            .zip(&other.nodes)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.distance(*y)))
            .fold(0.0, f64::max);
        Some(d)
    }
}
