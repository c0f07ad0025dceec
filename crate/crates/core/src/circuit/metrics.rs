//! Resource accounting.
//!
//! Cost model: an uncontrolled width-w block swap is w qubit swaps of three
//! CNOTs each. A controlled one keeps two CNOTs per rank and turns the
//! middle one into a multi-controlled NOT with one extra control. Multi-
//! controlled NOTs with two or more controls are tallied by control count
//! and never decomposed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Circuit, GateKind};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub gate_count_by_kind: BTreeMap<String, usize>,
    /// Number of controls -> count of multi-controlled NOTs (k >= 2),
    /// including those implied by controlled block swaps.
    pub multicontrol_histogram: BTreeMap<usize, usize>,
    pub swap_count: usize,
    /// MCX gates with exactly one control.
    pub cnot_gates: usize,
    pub ancilla_count: usize,
    pub depth: usize,
    pub cnot_equivalent: usize,
}

fn is_ancilla_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a' | 'w')) && chars.next().is_some_and(|c| c.is_ascii_digit())
}

pub fn metrics(c: &Circuit) -> ResourceReport {
    let mut r = ResourceReport::default();
    let mut frontier = vec![0usize; c.num_qubits()];
    for g in c.gates() {
        *r.gate_count_by_kind.entry(g.kind().name().to_string()).or_default() += 1;
        let n_ctrl = g.controls().len();
        match g.kind() {
            GateKind::Mcx if n_ctrl == 1 => {
                r.cnot_gates += 1;
                r.cnot_equivalent += 1;
            }
            GateKind::Mcx => *r.multicontrol_histogram.entry(n_ctrl).or_default() += 1,
            GateKind::BlockSwap => {
                r.swap_count += 1;
                let w = g.width();
                if n_ctrl == 0 {
                    r.cnot_equivalent += 3 * w;
                } else {
                    r.cnot_equivalent += 2 * w;
                    *r.multicontrol_histogram.entry(n_ctrl + 1).or_default() += w;
                }
            }
            _ => {}
        }
        let layer = g.qubits().map(|q| frontier[q.0]).max().unwrap_or(0) + 1;
        for q in g.qubits() {
            frontier[q.0] = layer;
        }
        r.depth = r.depth.max(layer);
    }
    r.ancilla_count = c
        .qubit_names()
        .map(|names| names.iter().filter(|n| is_ancilla_name(n)).count())
        .unwrap_or(0);
    r
}
