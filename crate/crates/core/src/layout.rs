//! Register layout.
//!
//! Particle slots come first, slot-major: slot `s` (1-based) occupies
//! qubits `(s-1)*n .. s*n`, the low `n-1` holding the single-particle
//! state index in binary and the top one the side bit (0 target,
//! 1 projectile). Then one Dicke ancilla per slot, `a1..am`, then work
//! ancillae `w1..`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{QubitId, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AntisymConfig {
    pub n_target: usize,
    pub n_projectile: usize,
    /// Qubits per particle, side qubit included.
    pub qubits_per_particle: usize,
    #[serde(default)]
    pub extra_work_ancillae: usize,
}

impl AntisymConfig {
    pub fn new(n_target: usize, n_projectile: usize, qubits_per_particle: usize) -> Self {
        AntisymConfig {
            n_target,
            n_projectile,
            qubits_per_particle,
            extra_work_ancillae: 0,
        }
    }

    pub fn with_extra(mut self, extra: usize) -> Self {
        self.extra_work_ancillae = extra;
        self
    }

    /// Total particle count `N_T + N_p`, which is also the Dicke register size.
    pub fn particles(&self) -> usize {
        self.n_target + self.n_projectile
    }

    pub fn validate(&self) -> Result<()> {
        let (nt, np, n) = (self.n_target, self.n_projectile, self.qubits_per_particle);
        if nt == 0 || np == 0 {
            return Err(Error::InvalidConfig(format!(
                "need at least one particle per side, got N_T={nt}, N_p={np}"
            )));
        }
        if np > nt {
            return Err(Error::InvalidConfig(format!(
                "N_p <= N_T required (the projectile is the smaller subsystem), got N_T={nt}, N_p={np}"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "qubits_per_particle must be at least 2 (one internal qubit plus the side qubit), got {n}"
            )));
        }
        if n >= usize::BITS as usize || (1usize << (n - 1)) < nt {
            return Err(Error::InvalidConfig(format!(
                "{} internal qubits cannot hold {nt} distinct orbitals",
                n - 1
            )));
        }
        if self.particles() > 64 {
            return Err(Error::InvalidConfig("more than 64 particles".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    /// 1-based slot index.
    pub index: usize,
    pub internal: Vec<QubitId>,
    pub side: QubitId,
}

impl Slot {
    /// Full block, internal qubits then the side qubit.
    pub fn block(&self) -> Vec<QubitId> {
        let mut b = self.internal.clone();
        b.push(self.side);
        b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub config: AntisymConfig,
    pub slots: Vec<Slot>,
    pub dicke_ancillae: Vec<QubitId>,
    pub work_ancillae: Vec<QubitId>,
    pub total_qubits: usize,
    pub qubit_names: Vec<String>,
}

impl Layout {
    /// Slot `i`, 1-based.
    pub fn slot(&self, i: usize) -> &Slot {
        &self.slots[i - 1]
    }

    /// Dicke ancilla `a_i`, 1-based.
    pub fn ancilla(&self, i: usize) -> QubitId {
        self.dicke_ancillae[i - 1]
    }

    /// Number of qubits used by particle slots.
    pub fn slot_qubits(&self) -> usize {
        self.slots.len() * self.config.qubits_per_particle
    }

    pub fn slot_blocks(&self) -> Vec<Vec<QubitId>> {
        self.slots.iter().map(Slot::block).collect()
    }

    pub fn is_target_slot(&self, i: usize) -> bool {
        i <= self.config.n_target
    }
}

pub fn build_layout(cfg: &AntisymConfig) -> Result<Layout> {
    cfg.validate()?;
    let n = cfg.qubits_per_particle;
    let m = cfg.particles();
    let mut names = Vec::with_capacity(m * n + m + cfg.extra_work_ancillae);
    let slots = (1..=m)
        .map(|s| {
            let base = (s - 1) * n;
            names.extend((0..n - 1).map(|r| format!("s{s}.q{r}")));
            names.push(format!("s{s}.side"));
            Slot {
                index: s,
                internal: (base..base + n - 1).map(QubitId).collect(),
                side: QubitId(base + n - 1),
            }
        })
        .collect();
    let dicke_ancillae = (0..m).map(|i| QubitId(m * n + i)).collect();
    names.extend((1..=m).map(|i| format!("a{i}")));
    let work_base = m * n + m;
    let work_ancillae = (0..cfg.extra_work_ancillae)
        .map(|i| QubitId(work_base + i))
        .collect();
    names.extend((1..=cfg.extra_work_ancillae).map(|i| format!("w{i}")));
    Ok(Layout {
        config: *cfg,
        slots,
        dicke_ancillae,
        work_ancillae,
        total_qubits: work_base + cfg.extra_work_ancillae,
        qubit_names: names,
    })
}

/// True iff every amplitude above 1e-12 in magnitude has side bit 0 on all
/// target slots and 1 on all projectile slots.
///
/// Slots occupy the low qubits, so any register at least as wide as the
/// slot region is accepted.
pub fn side_convention_check(state: &StateVector, layout: &Layout) -> Result<bool> {
    if state.num_qubits() < layout.slot_qubits() {
        return Err(Error::SizeMismatch {
            left: layout.total_qubits,
            right: state.num_qubits(),
        });
    }
    let mut mask = 0usize;
    let mut want = 0usize;
    for slot in &layout.slots {
        mask |= 1 << slot.side.0;
        if !layout.is_target_slot(slot.index) {
            want |= 1 << slot.side.0;
        }
    }
    Ok(state
        .amplitudes()
        .iter()
        .enumerate()
        .all(|(i, a)| a.norm() <= 1e-12 || i & mask == want))
}
