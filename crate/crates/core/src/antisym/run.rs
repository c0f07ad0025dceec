//! End-to-end simulation of the antisymmetrization circuit.

use serde::{Deserialize, Serialize};

use super::{build_full_circuit, AntisymCircuit, BuildOptions, Variant};
use crate::dicke::{dicke_amplitudes, DickeSpec};
use crate::error::{Error, Result};
use crate::layout::AntisymConfig;
use crate::oracle::{antisymmetry_residual, slot_blocks};
use crate::qstate::{QubitId, StateVector};

const INPUT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Probability that every ancilla (Dicke and work) ends in |0⟩.
    pub ancilla_ground_weight: f64,
    pub norm: f64,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    /// Final state on the whole register.
    pub state: StateVector,
    pub diagnostics: Diagnostics,
    pub built: AntisymCircuit,
}

impl RunOutput {
    /// Particle register in the all-ancillae-|0⟩ sector, not renormalized.
    pub fn particle_state(&self) -> Result<StateVector> {
        self.state.low_sector(self.built.layout.slot_qubits())
    }
}

/// Side bit of every slot must equal `side` on the whole support.
fn check_side(state: &StateVector, slots: usize, n: usize, side: usize, what: &str) -> Result<()> {
    let mask: usize = (0..slots).map(|s| 1 << (s * n + n - 1)).sum();
    let want = if side == 1 { mask } else { 0 };
    match state
        .amplitudes()
        .iter()
        .enumerate()
        .find(|(i, a)| a.norm() > 1e-12 && i & mask != want)
    {
        Some((i, _)) => Err(Error::SideConvention(format!(
            "{what} has amplitude on basis state {i:#b} with a side bit other than {side}"
        ))),
        None => Ok(()),
    }
}

fn check_input(state: &StateVector, slots: usize, n: usize, side: usize, what: &str) -> Result<()> {
    if state.num_qubits() != slots * n {
        return Err(Error::SizeMismatch {
            left: slots * n,
            right: state.num_qubits(),
        });
    }
    let norm = state.norm_sqr().sqrt();
    if (norm - 1.0).abs() > INPUT_TOL {
        return Err(Error::NotNormalized { norm });
    }
    check_side(state, slots, n, side, what)?;
    let residual = antisymmetry_residual(state, &slot_blocks(slots, n))?;
    if residual > INPUT_TOL {
        return Err(Error::NotAntisymmetric { residual });
    }
    Ok(())
}

/// Checks the inputs, builds the circuit, prepares
/// `target ⊗ projectile ⊗ D ⊗ |0…⟩` and simulates it.
pub fn run_antisymmetrization(
    target: &StateVector,
    projectile: &StateVector,
    cfg: &AntisymConfig,
    variant: Variant,
    opts: &BuildOptions,
) -> Result<RunOutput> {
    cfg.validate()?;
    let n = cfg.qubits_per_particle;
    check_input(target, cfg.n_target, n, 0, "target")?;
    check_input(projectile, cfg.n_projectile, n, 1, "projectile")?;

    let built = build_full_circuit(cfg, variant, opts)?;
    let slots = built.layout.slot_qubits();
    let total = built.circuit.num_qubits();
    let m = cfg.particles();

    let ancillae = if opts.use_gate_dicke {
        StateVector::zero(total - slots)?
    } else {
        let d = dicke_amplitudes(DickeSpec::new(m, cfg.n_projectile)?)?;
        d.tensor(&StateVector::zero(total - slots - m)?)?
    };
    let mut state = target.tensor(projectile)?.tensor(&ancillae)?;
    built.circuit.simulate(&mut state)?;

    let ancilla_ids: Vec<QubitId> = (slots..total).map(QubitId).collect();
    let diagnostics = Diagnostics {
        ancilla_ground_weight: state.ancilla_ground_weight(&ancilla_ids)?,
        norm: state.norm_sqr().sqrt(),
    };
    Ok(RunOutput {
        state,
        diagnostics,
        built,
    })
}
