//! Dense statevector with in-place kernels for the gate set used by the
//! antisymmetrization circuits.
//!
//! Qubit `q` is bit `q` of the amplitude index, so qubit 0 is the least
//! significant bit. Every module in the crate shares this convention.
//!
//! Kernels split the amplitude buffer into aligned chunks and hand them to
//! rayon once the state is large enough. All supported gates either permute
//! amplitudes within a chunk or mix disjoint pairs, so the result does not
//! depend on how the chunks are scheduled. Reductions (norms, overlaps) are
//! summed over fixed-size blocks and combined in order, which keeps them
//! bit-identical regardless of thread count.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the register size accepted by [`StateVector::zero`].
pub const DEFAULT_MAX_QUBITS: usize = 26;

/// Environment variable that overrides [`DEFAULT_MAX_QUBITS`].
pub const MAX_QUBITS_ENV: &str = "ANTISYMQ_MAX_QUBITS";

const PAR_THRESHOLD: usize = 1 << 14;
const REDUCE_BLOCK: usize = 1 << 14;

/// Capacity limit in effect: `ANTISYMQ_MAX_QUBITS` if set and parsable,
/// otherwise [`DEFAULT_MAX_QUBITS`].
pub fn max_qubits() -> usize {
    std::env::var(MAX_QUBITS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitId(pub usize);

impl QubitId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    #[inline]
    fn bit(self) -> usize {
        1 << self.0
    }
}

impl std::fmt::Display for QubitId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "q[{}]", self.0)
    }
}

/// Which basis value of a control qubit enables the gate.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    /// Fires on |0⟩.
    Open,
    /// Fires on |1⟩.
    Closed,
}

impl Polarity {
    pub fn flipped(self) -> Self {
        match self {
            Polarity::Open => Polarity::Closed,
            Polarity::Closed => Polarity::Open,
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Polarity::Closed
        } else {
            Polarity::Open
        }
    }

    pub fn required_bit(self) -> bool {
        self == Polarity::Closed
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Control {
    #[serde(rename = "q")]
    pub qubit: QubitId,
    #[serde(rename = "pol")]
    pub polarity: Polarity,
}

impl Control {
    pub fn closed(qubit: usize) -> Self {
        Control {
            qubit: QubitId(qubit),
            polarity: Polarity::Closed,
        }
    }

    pub fn open(qubit: usize) -> Self {
        Control {
            qubit: QubitId(qubit),
            polarity: Polarity::Open,
        }
    }

    pub fn flipped(self) -> Self {
        Control {
            qubit: self.qubit,
            polarity: self.polarity.flipped(),
        }
    }

    /// True when basis index `index` enables this control.
    #[inline]
    pub fn is_satisfied(&self, index: usize) -> bool {
        ((index >> self.qubit.0) & 1 == 1) == self.polarity.required_bit()
    }
}

/// Packed control condition: an index fires iff `index & mask == value`.
#[derive(Copy, Clone, Debug, Default)]
struct ControlMask {
    mask: usize,
    value: usize,
}

impl ControlMask {
    fn new(controls: &[Control]) -> Self {
        let mut m = ControlMask::default();
        for c in controls {
            m.mask |= c.qubit.bit();
            if c.polarity == Polarity::Closed {
                m.value |= c.qubit.bit();
            }
        }
        m
    }

    #[inline]
    fn fires(&self, index: usize) -> bool {
        index & self.mask == self.value
    }
}

/// Single-qubit actions that can be controlled.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum SingleQubitOp {
    X,
    Z,
    H,
    /// Rotation about Y: `Ry(θ)|0⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩`.
    Ry(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩ on `num_qubits` qubits, subject to [`max_qubits`].
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::zero_with_capacity(num_qubits, max_qubits())
    }

    pub fn zero_with_capacity(num_qubits: usize, max: usize) -> Result<Self> {
        if num_qubits > max {
            return Err(Error::Capacity {
                requested: num_qubits,
                max,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::zero(num_qubits)?;
        if index >= s.amps.len() {
            return Err(Error::LengthMismatch {
                expected: s.amps.len(),
                actual: index + 1,
            });
        }
        s.amps[0] = Complex64::new(0.0, 0.0);
        s.amps[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Wraps an amplitude buffer without normalizing it.
    pub fn from_amplitudes(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        let max = max_qubits();
        if num_qubits > max {
            return Err(Error::Capacity {
                requested: num_qubits,
                max,
            });
        }
        let expected = 1usize << num_qubits;
        if amps.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: amps.len(),
            });
        }
        Ok(StateVector { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        block_sum(&self.amps, |a| a.norm_sqr())
    }

    /// Rescales to unit norm and returns the norm before rescaling.
    pub fn normalize(&mut self) -> f64 {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            self.scale(Complex64::new(1.0 / norm, 0.0));
        }
        norm
    }

    pub fn scale(&mut self, factor: Complex64) {
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_iter_mut().for_each(|a| *a *= factor);
        } else {
            self.amps.iter_mut().for_each(|a| *a *= factor);
        }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_size(other)?;
        let partials: Vec<Complex64> = self
            .amps
            .par_chunks(REDUCE_BLOCK)
            .zip(other.amps.par_chunks(REDUCE_BLOCK))
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum())
            .collect();
        Ok(partials.into_iter().sum())
    }

    /// Product state with `self` on the low qubits and `high` above it.
    pub fn tensor(&self, high: &StateVector) -> Result<StateVector> {
        let total = self.num_qubits + high.num_qubits;
        let max = max_qubits();
        if total > max {
            return Err(Error::Capacity {
                requested: total,
                max,
            });
        }
        let low_len = self.amps.len();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << total];
        amps.par_chunks_mut(low_len)
            .zip(high.amps.par_iter())
            .for_each(|(chunk, h)| {
                if *h != Complex64::new(0.0, 0.0) {
                    for (dst, l) in chunk.iter_mut().zip(&self.amps) {
                        *dst = l * h;
                    }
                }
            });
        Ok(StateVector {
            num_qubits: total,
            amps,
        })
    }

    /// Amplitudes of the sector where every qubit at or above `keep` is |0⟩,
    /// as a state on the low `keep` qubits (not renormalized).
    pub fn low_sector(&self, keep: usize) -> Result<StateVector> {
        if keep > self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: keep,
                num_qubits: self.num_qubits,
            });
        }
        Ok(StateVector {
            num_qubits: keep,
            amps: self.amps[..1usize << keep].to_vec(),
        })
    }

    pub fn check_qubit(&self, q: QubitId) -> Result<()> {
        if q.0 >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q.0,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn check_distinct<'a>(&self, qubits: impl IntoIterator<Item = &'a QubitId>) -> Result<()> {
        let mut seen: usize = 0;
        for q in qubits {
            self.check_qubit(*q)?;
            if seen & q.bit() != 0 {
                return Err(Error::DuplicateQubit(q.0));
            }
            seen |= q.bit();
        }
        Ok(())
    }

    fn check_same_size(&self, other: &StateVector) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::SizeMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(())
    }

    pub fn apply_x(&mut self, q: QubitId) -> Result<()> {
        self.apply_controlled(&[], q, SingleQubitOp::X)
    }

    pub fn apply_z(&mut self, q: QubitId) -> Result<()> {
        self.apply_controlled(&[], q, SingleQubitOp::Z)
    }

    pub fn apply_h(&mut self, q: QubitId) -> Result<()> {
        self.apply_controlled(&[], q, SingleQubitOp::H)
    }

    pub fn apply_ry(&mut self, q: QubitId, theta: f64) -> Result<()> {
        self.apply_controlled(&[], q, SingleQubitOp::Ry(theta))
    }

    /// Multi-controlled NOT with mixed open/closed controls.
    pub fn apply_mcx(&mut self, controls: &[Control], target: QubitId) -> Result<()> {
        self.apply_controlled(controls, target, SingleQubitOp::X)
    }

    /// Applies `op` to `target` on every basis component that satisfies all
    /// `controls`; other amplitudes are left untouched.
    pub fn apply_controlled(
        &mut self,
        controls: &[Control],
        target: QubitId,
        op: SingleQubitOp,
    ) -> Result<()> {
        self.check_distinct(controls.iter().map(|c| &c.qubit).chain([&target]))?;
        let ctrl = ControlMask::new(controls);
        match op {
            SingleQubitOp::Z => self.phase_flip(target, ctrl),
            SingleQubitOp::X => self.pair_map(target, ctrl, std::mem::swap),
            SingleQubitOp::H => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.pair_map(target, ctrl, move |a, b| {
                    let (x, y) = (*a, *b);
                    *a = (x + y) * s;
                    *b = (x - y) * s;
                })
            }
            SingleQubitOp::Ry(theta) => {
                let (s, c) = (theta / 2.0).sin_cos();
                self.pair_map(target, ctrl, move |a, b| {
                    let (x, y) = (*a, *b);
                    *a = x * c - y * s;
                    *b = x * s + y * c;
                })
            }
        }
        Ok(())
    }

    /// Exchanges the bit groups `block_a` and `block_b` rank by rank on the
    /// components satisfying `controls`.
    pub fn apply_cswap_block(
        &mut self,
        controls: &[Control],
        block_a: &[QubitId],
        block_b: &[QubitId],
    ) -> Result<()> {
        if block_a.len() != block_b.len() {
            return Err(Error::BlockWidthMismatch {
                left: block_a.len(),
                right: block_b.len(),
            });
        }
        self.check_distinct(
            controls
                .iter()
                .map(|c| &c.qubit)
                .chain(block_a)
                .chain(block_b),
        )?;
        let ctrl = ControlMask::new(controls);
        // Controls are disjoint from the blocks, so a sequence of
        // rank-wise controlled swaps equals the block exchange.
        for (a, b) in block_a.iter().zip(block_b) {
            self.swap_pair(*a, *b, ctrl);
        }
        Ok(())
    }

    /// Total probability on components where every listed qubit is |0⟩.
    pub fn ancilla_ground_weight(&self, ancillae: &[QubitId]) -> Result<f64> {
        let mut mask = 0usize;
        for q in ancillae {
            self.check_qubit(*q)?;
            mask |= q.bit();
        }
        let partials: Vec<f64> = self
            .amps
            .par_chunks(REDUCE_BLOCK)
            .enumerate()
            .map(|(ci, chunk)| {
                let base = ci * REDUCE_BLOCK;
                chunk
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (base + i) & mask == 0)
                    .map(|(_, a)| a.norm_sqr())
                    .sum::<f64>()
            })
            .collect();
        Ok(partials.into_iter().sum())
    }

    fn phase_flip(&mut self, target: QubitId, ctrl: ControlMask) {
        let bit = target.bit();
        let body = |(i, a): (usize, &mut Complex64)| {
            if i & bit != 0 && ctrl.fires(i) {
                *a = -*a;
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_iter_mut().enumerate().for_each(body);
        } else {
            self.amps.iter_mut().enumerate().for_each(body);
        }
    }

    /// Visits every (|…0…⟩, |…1…⟩) pair on `target` whose controls fire.
    fn pair_map<F>(&mut self, target: QubitId, ctrl: ControlMask, f: F)
    where
        F: Fn(&mut Complex64, &mut Complex64) + Sync + Send,
    {
        let half = target.bit();
        let chunk = half << 1;
        let body = |(ci, block): (usize, &mut [Complex64])| {
            let base = ci * chunk;
            let (lo, hi) = block.split_at_mut(half);
            for (r, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if ctrl.fires(base + r) {
                    f(a, b);
                }
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps
                .par_chunks_mut(chunk)
                .enumerate()
                .for_each(body);
        } else {
            self.amps.chunks_mut(chunk).enumerate().for_each(body);
        }
    }

    /// Controlled SWAP of two qubits.
    fn swap_pair(&mut self, a: QubitId, b: QubitId, ctrl: ControlMask) {
        let (high, low) = if a.0 > b.0 { (a, b) } else { (b, a) };
        let half = high.bit();
        let low_bit = low.bit();
        let chunk = half << 1;
        let body = |(ci, block): (usize, &mut [Complex64])| {
            let base = ci * chunk;
            let (lo, hi) = block.split_at_mut(half);
            // hi[r] has (high=1, low=0); its partner lo[r | low_bit] has (0, 1).
            for r in (0..half).filter(|r| r & low_bit == 0) {
                if ctrl.fires(base + half + r) {
                    std::mem::swap(&mut hi[r], &mut lo[r | low_bit]);
                }
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps
                .par_chunks_mut(chunk)
                .enumerate()
                .for_each(body);
        } else {
            self.amps.chunks_mut(chunk).enumerate().for_each(body);
        }
    }
}

/// |⟨a|b⟩|².
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

fn block_sum<F>(amps: &[Complex64], f: F) -> f64
where
    F: Fn(&Complex64) -> f64 + Sync,
{
    let partials: Vec<f64> = amps
        .par_chunks(REDUCE_BLOCK)
        .map(|c| c.iter().map(&f).sum::<f64>())
        .collect();
    partials.into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_state(n: usize, seed: u64) -> StateVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..1usize << n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut s = StateVector::from_amplitudes(n, amps).unwrap();
        s.normalize();
        s
    }

    #[test]
    fn x_flips_basis_state() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_x(QubitId(0)).unwrap();
        assert_eq!(s.amplitudes(), &[c(0.0), c(1.0)]);
    }

    #[test]
    fn x_leaves_plus_state() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut s = StateVector::from_amplitudes(1, vec![c(h), c(h)]).unwrap();
        let before = s.clone();
        s.apply_x(QubitId(0)).unwrap();
        assert!((fidelity(&s, &before).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn x_twice_is_identity() {
        let s0 = random_state(3, 11);
        let mut s = s0.clone();
        s.apply_x(QubitId(2)).unwrap();
        s.apply_x(QubitId(2)).unwrap();
        assert!((fidelity(&s, &s0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn z_phases() {
        let mut one = StateVector::basis(1, 1).unwrap();
        one.apply_z(QubitId(0)).unwrap();
        assert_eq!(one.amplitude(1), c(-1.0));

        let mut zero = StateVector::zero(1).unwrap();
        zero.apply_z(QubitId(0)).unwrap();
        assert_eq!(zero.amplitude(0), c(1.0));

        // (|01⟩ + |11⟩)/√2 with qubit 0 = 1; Z on qubit 1 flips the |11⟩ sign
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut s =
            StateVector::from_amplitudes(2, vec![c(0.0), c(h), c(0.0), c(h)]).unwrap();
        s.apply_z(QubitId(1)).unwrap();
        assert_eq!(s.amplitudes(), &[c(0.0), c(h), c(0.0), c(-h)]);
    }

    #[test]
    fn toffoli_truth_table() {
        // Controls on qubits 0 and 1, target qubit 2.
        let mut s = StateVector::basis(3, 0b011).unwrap();
        s.apply_mcx(&[Control::closed(0), Control::closed(1)], QubitId(2))
            .unwrap();
        assert_eq!(s.amplitude(0b111), c(1.0));

        let mut s = StateVector::basis(3, 0b010).unwrap();
        s.apply_mcx(&[Control::closed(0), Control::closed(1)], QubitId(2))
            .unwrap();
        assert_eq!(s.amplitude(0b010), c(1.0));
    }

    #[test]
    fn open_control_polarity() {
        let mut s = StateVector::basis(3, 0b001).unwrap();
        s.apply_mcx(&[Control::open(0)], QubitId(1)).unwrap();
        assert_eq!(s.amplitude(0b001), c(1.0));

        let mut s = StateVector::zero(3).unwrap();
        s.apply_mcx(&[Control::open(0)], QubitId(1)).unwrap();
        assert_eq!(s.amplitude(0b010), c(1.0));
    }

    #[test]
    fn mcx_rejects_overlap() {
        let mut s = StateVector::zero(2).unwrap();
        let err = s.apply_mcx(&[Control::closed(1)], QubitId(1)).unwrap_err();
        assert_eq!(err, Error::DuplicateQubit(1));
        let err = s.apply_x(QubitId(5)).unwrap_err();
        assert!(matches!(err, Error::QubitOutOfRange { qubit: 5, .. }));
    }

    #[test]
    fn plain_swap() {
        let mut s = StateVector::basis(2, 0b01).unwrap();
        s.apply_cswap_block(&[], &[QubitId(0)], &[QubitId(1)]).unwrap();
        assert_eq!(s.amplitude(0b10), c(1.0));
    }

    #[test]
    fn block_swap_rank_wise() {
        // a = qubits (0,1) holding 10 -> q0=1,q1=0; b = (2,3) holding 01; control q4 = 1
        let idx = 0b1_10_01; // q4=1, q3=1? no: build explicitly below
        let _ = idx;
        let a = [QubitId(0), QubitId(1)];
        let b = [QubitId(2), QubitId(3)];
        let start = 1 /*q0*/ | (1 << 3) /*q3*/ | (1 << 4);
        let mut s = StateVector::basis(5, start).unwrap();
        s.apply_cswap_block(&[Control::closed(4)], &a, &b).unwrap();
        let expected = (1 << 1) | (1 << 2) | (1 << 4);
        assert_eq!(s.amplitude(expected), c(1.0));

        // control not satisfied: untouched
        let start = 1 | (1 << 3);
        let mut s = StateVector::basis(5, start).unwrap();
        s.apply_cswap_block(&[Control::closed(4)], &a, &b).unwrap();
        assert_eq!(s.amplitude(start), c(1.0));
    }

    #[test]
    fn block_swap_errors() {
        let mut s = StateVector::zero(4).unwrap();
        assert!(matches!(
            s.apply_cswap_block(&[], &[QubitId(0)], &[QubitId(1), QubitId(2)]),
            Err(Error::BlockWidthMismatch { .. })
        ));
        assert!(matches!(
            s.apply_cswap_block(&[Control::closed(0)], &[QubitId(0)], &[QubitId(1)]),
            Err(Error::DuplicateQubit(0))
        ));
    }

    #[test]
    fn fidelity_values() {
        let zero = StateVector::zero(1).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_amplitudes(1, vec![c(h), c(h)]).unwrap();
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);
        assert!((fidelity(&plus, &zero).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            fidelity(&zero, &StateVector::zero(2).unwrap()),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn ground_weight_values() {
        let s = StateVector::zero(3).unwrap();
        assert_eq!(s.ancilla_ground_weight(&[QubitId(1), QubitId(2)]).unwrap(), 1.0);
        let s = StateVector::basis(2, 0b10).unwrap();
        assert_eq!(s.ancilla_ground_weight(&[QubitId(1)]).unwrap(), 0.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_amplitudes(1, vec![c(h), c(h)]).unwrap();
        let s = StateVector::zero(1).unwrap().tensor(&plus).unwrap();
        assert!((s.ancilla_ground_weight(&[QubitId(1)]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(matches!(
            StateVector::zero_with_capacity(5, 4),
            Err(Error::Capacity { requested: 5, max: 4 })
        ));
        assert!(matches!(
            StateVector::from_amplitudes(2, vec![c(1.0)]),
            Err(Error::LengthMismatch { expected: 4, actual: 1 })
        ));
    }

    #[test]
    fn parallel_and_sequential_kernels_agree() {
        // 15 qubits crosses PAR_THRESHOLD; compare against a per-amplitude reference.
        let n = 15;
        let s0 = random_state(n, 3);
        let ctrls = [Control::closed(14), Control::open(2)];
        let mut s = s0.clone();
        s.apply_cswap_block(&ctrls, &[QubitId(0), QubitId(5)], &[QubitId(9), QubitId(13)])
            .unwrap();
        let mut expected = s0.amplitudes().to_vec();
        for (i, e) in expected.iter_mut().enumerate() {
            let fires = (i >> 14) & 1 == 1 && (i >> 2) & 1 == 0;
            let src = if fires {
                let mut j = i;
                for (a, b) in [(0, 9), (5, 13)] {
                    let (ba, bb) = ((i >> a) & 1, (i >> b) & 1);
                    j = (j & !(1 << a) & !(1 << b)) | (bb << a) | (ba << b);
                }
                j
            } else {
                i
            };
            *e = s0.amplitude(src);
        }
        assert_eq!(s.amplitudes(), expected.as_slice());
    }
}
