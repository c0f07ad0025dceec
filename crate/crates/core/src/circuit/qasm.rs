//! OpenQASM 3.0 emission. Control structure is kept as `ctrl @` and
//! `negctrl @` modifiers; block swaps become one `swap` per rank.

use std::fmt::Write;

use super::{Circuit, Gate, GateKind};
use crate::qstate::{Polarity, QubitId};

fn modifiers(g: &Gate) -> String {
    g.controls()
        .iter()
        .map(|c| match c.polarity {
            Polarity::Closed => "ctrl @ ",
            Polarity::Open => "negctrl @ ",
        })
        .collect()
}

fn operands(g: &Gate, targets: &[QubitId]) -> String {
    g.controls()
        .iter()
        .map(|c| c.qubit)
        .chain(targets.iter().copied())
        .map(|q| format!("q[{}]", q.0))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn emit_qasm(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    if let Some(names) = c.qubit_names() {
        for (i, name) in names.iter().enumerate() {
            let _ = writeln!(out, "// q[{i}] = {name}");
        }
    }
    let _ = writeln!(out, "qubit[{}] q;", c.num_qubits());
    for g in c.gates() {
        if let Some(label) = g.label() {
            let _ = writeln!(out, "// {label}");
        }
        let m = modifiers(g);
        match g.kind() {
            GateKind::X | GateKind::Mcx => {
                let _ = writeln!(out, "{m}x {};", operands(g, g.targets()));
            }
            GateKind::Z => {
                let _ = writeln!(out, "{m}z {};", operands(g, g.targets()));
            }
            GateKind::H => {
                let _ = writeln!(out, "{m}h {};", operands(g, g.targets()));
            }
            GateKind::Ry(theta) => {
                let _ = writeln!(out, "{m}ry({theta}) {};", operands(g, g.targets()));
            }
            GateKind::BlockSwap => {
                let (a, b) = g.blocks();
                for (x, y) in a.iter().zip(b) {
                    let _ = writeln!(out, "{m}swap {};", operands(g, &[*x, *y]));
                }
            }
        }
    }
    out
}
