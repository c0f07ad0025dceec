//! Dicke states `D^m_k`, the uniform superposition of all m-bit basis
//! states with exactly k ones.
//!
//! The gate-based preparation is the split-and-cyclic-shift cascade: start
//! from `|0^{m-k} 1^k⟩` and apply one block of controlled rotations per
//! qubit, each block moving amplitude from `D^{l}` to `D^{l-1}` slices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, CircuitBuilder, Gate};
use crate::error::{Error, Result};
use crate::qstate::{Control, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DickeSpec {
    pub m: usize,
    pub k: usize,
}

impl DickeSpec {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        let s = DickeSpec { m, k };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > self.m || self.m > 63 {
            return Err(Error::InvalidDicke { m: self.m, k: self.k });
        }
        Ok(())
    }
}

pub fn dicke_amplitudes(spec: DickeSpec) -> Result<StateVector> {
    spec.validate()?;
    let mut s = StateVector::zero(spec.m)?;
    let count = (0..1usize << spec.m)
        .filter(|i| i.count_ones() as usize == spec.k)
        .count();
    let amp = Complex64::new(1.0 / (count as f64).sqrt(), 0.0);
    for (i, a) in s.amplitudes_mut().iter_mut().enumerate() {
        *a = if i.count_ones() as usize == spec.k {
            amp
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    Ok(s)
}

/// Appends the split-and-cyclic-shift block on qubits `1..=nn` (1-based,
/// qubit `q` is register index `q-1`) handling up to `k` excitations.
fn scs(b: &mut CircuitBuilder, nn: usize, k: usize) -> Result<()> {
    let idx = |q: usize| q - 1;
    let top = idx(nn);
    for l in 1..=k {
        let lower = idx(nn - l);
        let theta = 2.0 * ((l as f64) / (nn as f64)).sqrt().acos();
        let mut ctrls = vec![Control::closed(top)];
        if l > 1 {
            ctrls.push(Control::closed(idx(nn - l + 1)));
        }
        b.push(Gate::mcx(vec![Control::closed(lower)], top))?;
        b.push(Gate::ry(lower, theta).controlled_by(ctrls))?;
        b.push(Gate::mcx(vec![Control::closed(lower)], top))?;
    }
    Ok(())
}

/// Unitary preparing `D^m_k` from `|0…0⟩` on `m` qubits named `a1..am`.
pub fn dicke_circuit(spec: DickeSpec) -> Result<Circuit> {
    spec.validate()?;
    let (m, k) = (spec.m, spec.k);
    let mut b = CircuitBuilder::with_names((1..=m).map(|i| format!("a{i}")).collect());
    for q in m - k..m {
        b.push(Gate::x(q))?;
    }
    if k == m {
        return Ok(b.build());
    }
    for nn in (k + 1..=m).rev() {
        scs(&mut b, nn, k)?;
    }
    for nn in (2..=k).rev() {
        scs(&mut b, nn, nn - 1)?;
    }
    Ok(b.build())
}
