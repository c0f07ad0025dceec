//! Gate-list circuit IR.
//!
//! A [`Circuit`] is an immutable, validated list of [`Gate`]s over a fixed
//! register. Generators build circuits through [`CircuitBuilder`]; passes
//! consume a circuit and return a new one.

mod metrics;
mod passes;
mod qasm;

pub use metrics::{metrics, ResourceReport};
pub use passes::{parallelize, peephole_collapse, DickeConstraint, FlagPolicy};
pub use qasm::emit_qasm;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{Control, QubitId, SingleQubitOp, StateVector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    X,
    Z,
    H,
    Ry(f64),
    Mcx,
    BlockSwap,
}

impl GateKind {
    /// Lowercase kind name used in JSON and reports.
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::Ry(_) => "ry",
            GateKind::Mcx => "mcx",
            GateKind::BlockSwap => "blockswap",
        }
    }
}

/// One circuit element.
///
/// `X` is the uncontrolled bit flip; a controlled flip is `Mcx`. `Z`, `H`
/// and `Ry` may carry controls. A `BlockSwap` stores its two blocks
/// flattened in `targets`, first block then second.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "GateRecord", try_from = "GateRecord")]
pub struct Gate {
    kind: GateKind,
    controls: Vec<Control>,
    targets: Vec<QubitId>,
    label: Option<String>,
}

impl Gate {
    pub fn x(q: usize) -> Self {
        Self::raw(GateKind::X, vec![], vec![QubitId(q)])
    }

    pub fn z(q: usize) -> Self {
        Self::raw(GateKind::Z, vec![], vec![QubitId(q)])
    }

    pub fn h(q: usize) -> Self {
        Self::raw(GateKind::H, vec![], vec![QubitId(q)])
    }

    pub fn ry(q: usize, theta: f64) -> Self {
        Self::raw(GateKind::Ry(theta), vec![], vec![QubitId(q)])
    }

    pub fn mcx(controls: Vec<Control>, target: usize) -> Self {
        Self::raw(GateKind::Mcx, controls, vec![QubitId(target)])
    }

    pub fn block_swap(controls: Vec<Control>, block_a: &[QubitId], block_b: &[QubitId]) -> Self {
        let targets = block_a.iter().chain(block_b).copied().collect();
        Self::raw(GateKind::BlockSwap, controls, targets)
    }

    /// Adds controls to a Z/H/Ry gate (for X use [`Gate::mcx`]).
    pub fn controlled_by(mut self, controls: Vec<Control>) -> Self {
        self.controls.extend(controls);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    fn raw(kind: GateKind, controls: Vec<Control>, targets: Vec<QubitId>) -> Self {
        Gate {
            kind,
            controls,
            targets,
            label: None,
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    pub fn targets(&self) -> &[QubitId] {
        &self.targets
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Block width for a BlockSwap, 1 otherwise.
    pub fn width(&self) -> usize {
        match self.kind {
            GateKind::BlockSwap => self.targets.len() / 2,
            _ => 1,
        }
    }

    /// The two swapped blocks. Empty slices for other kinds.
    pub fn blocks(&self) -> (&[QubitId], &[QubitId]) {
        match self.kind {
            GateKind::BlockSwap => self.targets.split_at(self.width()),
            _ => (&[], &[]),
        }
    }

    /// Every qubit the gate touches, controls first.
    pub fn qubits(&self) -> impl Iterator<Item = QubitId> + '_ {
        self.controls
            .iter()
            .map(|c| c.qubit)
            .chain(self.targets.iter().copied())
    }

    /// Whether the gate is diagonal in the computational basis on `q`.
    fn diagonal_on(&self, q: QubitId) -> bool {
        matches!(self.kind, GateKind::Z) || self.controls.iter().any(|c| c.qubit == q)
    }

    /// Sufficient commutation test: every shared qubit is acted on
    /// diagonally by both gates.
    pub fn commutes_with(&self, other: &Gate) -> bool {
        self.qubits()
            .filter(|q| other.qubits().any(|p| p == *q))
            .all(|q| self.diagonal_on(q) && other.diagonal_on(q))
    }

    /// Checks structural invariants against a register of `num_qubits`.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let expected_targets = match self.kind {
            GateKind::BlockSwap => {
                if self.targets.is_empty() || !self.targets.len().is_multiple_of(2) {
                    return Err(Error::InvalidGate(format!(
                        "block swap needs two equal non-empty blocks, got {} targets",
                        self.targets.len()
                    )));
                }
                self.targets.len()
            }
            _ => 1,
        };
        if self.targets.len() != expected_targets {
            return Err(Error::InvalidGate(format!(
                "{} takes one target, got {}",
                self.kind.name(),
                self.targets.len()
            )));
        }
        match self.kind {
            GateKind::X if !self.controls.is_empty() => {
                return Err(Error::InvalidGate("controlled X must be an MCX".into()))
            }
            GateKind::Mcx if self.controls.is_empty() => {
                return Err(Error::InvalidGate("MCX needs at least one control".into()))
            }
            GateKind::Ry(t) if !t.is_finite() => {
                return Err(Error::InvalidGate("non-finite rotation angle".into()))
            }
            _ => {}
        }
        let mut seen = std::collections::BTreeSet::new();
        for q in self.qubits() {
            if q.0 >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q.0,
                    num_qubits,
                });
            }
            if !seen.insert(q) {
                return Err(Error::DuplicateQubit(q.0));
            }
        }
        Ok(())
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        let t = self.targets[0];
        match self.kind {
            GateKind::X | GateKind::Mcx => state.apply_mcx(&self.controls, t),
            GateKind::Z => state.apply_controlled(&self.controls, t, SingleQubitOp::Z),
            GateKind::H => state.apply_controlled(&self.controls, t, SingleQubitOp::H),
            GateKind::Ry(theta) => {
                state.apply_controlled(&self.controls, t, SingleQubitOp::Ry(theta))
            }
            GateKind::BlockSwap => {
                let (a, b) = self.blocks();
                state.apply_cswap_block(&self.controls, a, b)
            }
        }
    }

    /// Same gate with every qubit sent through `map`.
    pub fn remapped(&self, map: impl Fn(QubitId) -> QubitId) -> Gate {
        Gate {
            kind: self.kind,
            controls: self
                .controls
                .iter()
                .map(|c| Control {
                    qubit: map(c.qubit),
                    polarity: c.polarity,
                })
                .collect(),
            targets: self.targets.iter().map(|q| map(*q)).collect(),
            label: self.label.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
    controls: Vec<Control>,
    targets: Vec<QubitId>,
    width: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl From<Gate> for GateRecord {
    fn from(g: Gate) -> Self {
        GateRecord {
            kind: g.kind.name().to_string(),
            angle: match g.kind {
                GateKind::Ry(t) => Some(t),
                _ => None,
            },
            width: g.width(),
            controls: g.controls,
            targets: g.targets,
            label: g.label,
        }
    }
}

impl TryFrom<GateRecord> for Gate {
    type Error = Error;

    fn try_from(r: GateRecord) -> Result<Self> {
        let kind = match r.kind.as_str() {
            "x" => GateKind::X,
            "z" => GateKind::Z,
            "h" => GateKind::H,
            "ry" => GateKind::Ry(
                r.angle
                    .ok_or_else(|| Error::Parse("ry gate without angle".into()))?,
            ),
            "mcx" => GateKind::Mcx,
            "blockswap" => GateKind::BlockSwap,
            other => return Err(Error::Parse(format!("unknown gate kind {other:?}"))),
        };
        let g = Gate {
            kind,
            controls: r.controls,
            targets: r.targets,
            label: r.label,
        };
        if g.width() != r.width {
            return Err(Error::Parse(format!(
                "width {} disagrees with {} targets",
                r.width,
                g.targets.len()
            )));
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircuitRecord")]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    qubit_names: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct CircuitRecord {
    num_qubits: usize,
    gates: Vec<Gate>,
    #[serde(default)]
    qubit_names: Option<Vec<String>>,
}

impl TryFrom<CircuitRecord> for Circuit {
    type Error = Error;

    fn try_from(r: CircuitRecord) -> Result<Self> {
        Circuit::new(r.num_qubits, r.gates, r.qubit_names)
    }
}

impl Circuit {
    pub fn new(num_qubits: usize, gates: Vec<Gate>, qubit_names: Option<Vec<String>>) -> Result<Self> {
        if let Some(names) = &qubit_names {
            if names.len() != num_qubits {
                return Err(Error::LengthMismatch {
                    expected: num_qubits,
                    actual: names.len(),
                });
            }
        }
        for g in &gates {
            g.validate(num_qubits)?;
        }
        Ok(Circuit {
            num_qubits,
            gates,
            qubit_names,
        })
    }

    pub fn empty(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
            qubit_names: None,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn qubit_names(&self) -> Option<&[String]> {
        self.qubit_names.as_deref()
    }

    pub fn qubit_name(&self, q: QubitId) -> Option<&str> {
        self.qubit_names
            .as_ref()
            .and_then(|n| n.get(q.0))
            .map(String::as_str)
    }

    /// Runs every gate in order on `state`.
    pub fn simulate(&self, state: &mut StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::SizeMismatch {
                left: self.num_qubits,
                right: state.num_qubits(),
            });
        }
        self.gates.iter().try_for_each(|g| g.apply(state))
    }

    /// Builder seeded with this circuit's register and gates.
    pub fn to_builder(&self) -> CircuitBuilder {
        CircuitBuilder {
            num_qubits: self.num_qubits,
            gates: self.gates.clone(),
            names: self
                .qubit_names
                .clone()
                .unwrap_or_else(|| default_names(self.num_qubits)),
        }
    }

    /// Gates `range` as a circuit on the same register.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates[range].to_vec(),
            qubit_names: self.qubit_names.clone(),
        }
    }
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

/// Incremental construction with validation on every push.
#[derive(Clone, Debug)]
pub struct CircuitBuilder {
    num_qubits: usize,
    gates: Vec<Gate>,
    names: Vec<String>,
}

impl CircuitBuilder {
    pub fn new(num_qubits: usize) -> Self {
        CircuitBuilder {
            num_qubits,
            gates: Vec::new(),
            names: default_names(num_qubits),
        }
    }

    pub fn with_names(names: Vec<String>) -> Self {
        CircuitBuilder {
            num_qubits: names.len(),
            gates: Vec::new(),
            names,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a qubit at the top of the register.
    pub fn add_qubit(&mut self, name: impl Into<String>) -> QubitId {
        self.names.push(name.into());
        self.num_qubits += 1;
        QubitId(self.num_qubits - 1)
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends `other`'s gates; `other` must not be wider than this register.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.num_qubits > self.num_qubits {
            return Err(Error::SizeMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(self)
    }

    pub fn build(self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates,
            qubit_names: Some(self.names),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn validation_rejects_bad_gates() {
        assert!(matches!(
            Gate::mcx(vec![Control::closed(0)], 0).validate(2),
            Err(Error::DuplicateQubit(0))
        ));
        assert!(matches!(
            Gate::x(3).validate(2),
            Err(Error::QubitOutOfRange { qubit: 3, .. })
        ));
        assert!(Gate::mcx(vec![], 0).validate(1).is_err());
        let odd = Gate::raw(GateKind::BlockSwap, vec![], vec![QubitId(0), QubitId(1), QubitId(2)]);
        assert!(odd.validate(3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut b = CircuitBuilder::new(4);
        b.push(Gate::ry(0, 0.25)).unwrap();
        b.push(Gate::mcx(vec![Control::open(0), Control::closed(1)], 2).with_label("flag"))
            .unwrap();
        b.push(Gate::block_swap(vec![Control::closed(3)], &[QubitId(0)], &[QubitId(1)]))
            .unwrap();
        let c = b.build();
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains(r#""pol":"open""#));
        assert!(text.contains(r#""width":1"#));
        let back: Circuit = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn json_rejects_invalid_circuit() {
        let text = r#"{"num_qubits":1,"gates":[{"kind":"x","controls":[],"targets":[4],"width":1}]}"#;
        assert!(serde_json::from_str::<Circuit>(text).is_err());
    }

    #[test]
    fn commutation_rule() {
        let a = Gate::mcx(vec![Control::closed(0)], 1);
        let b = Gate::mcx(vec![Control::closed(0)], 2);
        let c = Gate::mcx(vec![Control::closed(1)], 2);
        let z = Gate::z(0);
        assert!(a.commutes_with(&b));
        assert!(!a.commutes_with(&c));
        assert!(a.commutes_with(&z));
        assert!(!Gate::x(0).commutes_with(&z));
    }

    #[test]
    fn simulate_checks_register() {
        let c = Circuit::empty(2);
        let mut s = StateVector::zero(3).unwrap();
        assert!(c.simulate(&mut s).is_err());
        let mut s = StateVector::zero(2).unwrap();
        c.simulate(&mut s).unwrap();
        assert_eq!(s.amplitude(0), Complex64::new(1.0, 0.0));
    }
}
