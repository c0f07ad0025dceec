//! Assembly of the full circuit: Dicke preparation, swaps, phase, uncompute.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::schedule::generate_shared_schedule_with;
use super::{generate_reference_schedule, Compilation, Literal, Predicate, SharedOptions, SwapSchedule, Variant};
use crate::circuit::{
    parallelize, peephole_collapse, Circuit, CircuitBuilder, DickeConstraint, FlagPolicy, Gate,
};
use crate::dicke::{dicke_circuit, DickeSpec};
use crate::error::{Error, Result};
use crate::layout::{build_layout, AntisymConfig, Layout};
use crate::qstate::{Control, Polarity, QubitId};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Prepare the Dicke state with gates instead of expecting it injected.
    pub use_gate_dicke: bool,
    /// Extra work qubits for the parallel variant; `None` means `N_p`.
    pub parallel_ancillae: Option<usize>,
    /// Run the swap-collapse pass on the swap stage.
    pub collapse: bool,
    pub flag_policy: FlagPolicy,
    pub shared: SharedOptions,
}

/// Gate index ranges of the four stages.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSpans {
    pub dicke: Range<usize>,
    pub swap: Range<usize>,
    pub phase: Range<usize>,
    pub uncompute: Range<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AntisymCircuit {
    pub circuit: Circuit,
    pub layout: Layout,
    pub schedule: SwapSchedule,
    pub stages: StageSpans,
}

impl AntisymCircuit {
    pub fn stage(&self, span: &Range<usize>) -> Circuit {
        self.circuit.slice(span.clone())
    }

    pub fn swap_stage(&self) -> Circuit {
        self.stage(&self.stages.swap)
    }

    /// Dicke ancillae followed by every work qubit, including any added by
    /// passes.
    pub fn ancillae(&self) -> Vec<QubitId> {
        (self.layout.slot_qubits()..self.circuit.num_qubits())
            .map(QubitId)
            .collect()
    }
}

fn controls(layout: &Layout, literals: &[Literal]) -> Vec<Control> {
    literals
        .iter()
        .map(|l| Control {
            qubit: layout.ancilla(l.ancilla),
            polarity: Polarity::from_bit(l.value),
        })
        .collect()
}

/// Lowers a schedule onto the layout. Term predicates become directly
/// controlled swaps; disjunctions compute a flag qubit first.
pub(crate) fn compile_swap_stage(schedule: &SwapSchedule, layout: &Layout) -> Result<Circuit> {
    schedule.check()?;
    let mut b = CircuitBuilder::with_names(layout.qubit_names.clone());
    let mut flag: Option<QubitId> = layout.work_ancillae.first().copied();
    for op in &schedule.ops {
        let left = layout.slot(op.slot_a).block();
        let right = layout.slot(op.slot_b).block();
        let label = format!("swap#{}", op.order + 1);
        match &op.predicate {
            Predicate::Term { literals } => {
                b.push(Gate::block_swap(controls(layout, literals), &left, &right).with_label(label))?;
            }
            Predicate::AnyOf { terms } => {
                let w = match flag {
                    Some(w) => w,
                    None => {
                        let w = b.add_qubit(format!("w{}", layout.work_ancillae.len() + 1));
                        flag = Some(w);
                        w
                    }
                };
                let compute: Vec<Gate> = terms
                    .iter()
                    .map(|t| {
                        if t.is_empty() {
                            Gate::x(w.0)
                        } else {
                            Gate::mcx(controls(layout, t), w.0)
                        }
                    })
                    .collect();
                for g in &compute {
                    b.push(g.clone())?;
                }
                b.push(Gate::block_swap(vec![Control::closed(w.0)], &left, &right).with_label(label))?;
                for g in compute {
                    b.push(g)?;
                }
            }
        }
    }
    Ok(b.build())
}

pub fn build_full_circuit(cfg: &AntisymConfig, variant: Variant, opts: &BuildOptions) -> Result<AntisymCircuit> {
    let layout = build_layout(cfg)?;
    let (nt, np, m) = (cfg.n_target, cfg.n_projectile, cfg.particles());
    let extra = match (variant, opts.parallel_ancillae) {
        (Variant::Parallel, None) => np,
        (Variant::Parallel, Some(0)) => {
            return Err(Error::InvalidOptions("the parallel variant needs at least one extra ancilla".into()))
        }
        (Variant::Parallel, Some(k)) => k,
        (_, Some(_)) => {
            return Err(Error::InvalidOptions("extra parallel ancillae only apply to the parallel variant".into()))
        }
        (_, None) => 0,
    };

    let mut schedule = match variant {
        Variant::Reference => generate_reference_schedule(cfg)?,
        Variant::Shared => generate_shared_schedule_with(cfg, &opts.shared)?,
        Variant::Parallel => {
            let shared = SharedOptions {
                compilation: Compilation::Flags,
                ..opts.shared
            };
            generate_shared_schedule_with(cfg, &shared)?
        }
    };
    schedule.variant = variant;

    let mut region = compile_swap_stage(&schedule, &layout)?;
    if opts.collapse {
        let constraint = DickeConstraint {
            ancillae: layout.dicke_ancillae.clone(),
            weight: np,
        };
        region = peephole_collapse(&region, &constraint, opts.flag_policy)?;
    }
    if variant == Variant::Parallel {
        region = parallelize(&region, extra)?;
    }

    let names = region
        .qubit_names()
        .map(<[String]>::to_vec)
        .unwrap_or_else(|| layout.qubit_names.clone());
    let mut b = CircuitBuilder::with_names(names);

    if opts.use_gate_dicke {
        let prep = dicke_circuit(DickeSpec::new(m, np)?)?;
        for g in prep.gates() {
            b.push(g.remapped(|q| layout.dicke_ancillae[q.0]).with_label("dicke"))?;
        }
    }
    let dicke = 0..b.len();

    b.append(&region)?;
    let swap = dicke.end..b.len();

    for i in 1..=nt {
        b.push(Gate::z(layout.ancilla(i).0).with_label("phase"))?;
    }
    let phase = swap.end..b.len();

    for i in 1..=m {
        let side = layout.slot(i).side;
        b.push(Gate::mcx(vec![Control::closed(side.0)], layout.ancilla(i).0).with_label("uncompute"))?;
    }
    let uncompute = phase.end..b.len();

    Ok(AntisymCircuit {
        circuit: b.build(),
        layout,
        schedule,
        stages: StageSpans {
            dicke,
            swap,
            phase,
            uncompute,
        },
    })
}
