//! Circuit-to-circuit rewrites for the swap region.
//!
//! Both passes only rewrite when the result is provably equivalent on the
//! declared input space. New work qubits go on top of the register and are
//! named `w<k>` after the highest existing work index.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{metrics, Circuit, CircuitBuilder, Gate, GateKind};
use crate::error::{Error, Result};
use crate::qstate::{Control, Polarity, QubitId};

/// Inputs where `ancillae` hold a basis pattern with exactly `weight` ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DickeConstraint {
    pub ancillae: Vec<QubitId>,
    pub weight: usize,
}

impl DickeConstraint {
    /// All admissible patterns, bit `i` giving the value of `ancillae[i]`.
    fn patterns(&self) -> Vec<u64> {
        crate::antisym::weight_patterns(self.ancillae.len(), self.weight)
    }

    fn position(&self, q: QubitId) -> Option<usize> {
        self.ancillae.iter().position(|a| *a == q)
    }

    /// Whether some admissible pattern satisfies every control in `conds`.
    /// `None` when a control falls outside the constrained register.
    fn satisfiable(&self, conds: &[Control]) -> Option<bool> {
        let mut mask = 0u64;
        let mut value = 0u64;
        for c in conds {
            let bit = 1u64 << self.position(c.qubit)?;
            if mask & bit != 0 && (value & bit != 0) != c.polarity.required_bit() {
                return Some(false);
            }
            mask |= bit;
            if c.polarity == Polarity::Closed {
                value |= bit;
            }
        }
        Some(self.patterns().iter().any(|p| p & mask == value))
    }
}

/// How [`peephole_collapse`] provisions flag qubits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlagPolicy {
    /// One flag shared by every merge; each merge returns it to |0⟩.
    #[default]
    Reuse,
    /// A new flag per merge, so merged swaps on disjoint slots can overlap.
    Fresh,
}

fn next_work_index(b: &CircuitBuilder) -> usize {
    b.names
        .iter()
        .filter_map(|n| n.strip_prefix('w').and_then(|r| r.parse::<usize>().ok()))
        .max()
        .map_or(1, |m| m + 1)
}

fn same_blocks(a: &Gate, b: &Gate) -> bool {
    let (a1, a2) = a.blocks();
    let (b1, b2) = b.blocks();
    (a1 == b1 && a2 == b2) || (a1 == b2 && a2 == b1)
}

/// Splits two control lists into a shared part P and one extra control on
/// each side, on different qubits that P does not mention.
fn split_single_difference(ci: &[Control], cj: &[Control]) -> Option<(Vec<Control>, Control, Control)> {
    let si: BTreeSet<Control> = ci.iter().copied().collect();
    let sj: BTreeSet<Control> = cj.iter().copied().collect();
    let common: Vec<Control> = si.intersection(&sj).copied().collect();
    let ri: Vec<Control> = si.difference(&sj).copied().collect();
    let rj: Vec<Control> = sj.difference(&si).copied().collect();
    if ri.len() != 1 || rj.len() != 1 {
        return None;
    }
    let (x, y) = (ri[0], rj[0]);
    if x.qubit == y.qubit || common.iter().any(|c| c.qubit == x.qubit || c.qubit == y.qubit) {
        return None;
    }
    Some((common, x, y))
}

/// Merges pairs of controlled block swaps on the same slots whose controls
/// are `P∧x` and `P∧y` into one swap controlled on `P∧(x∨y)`, computing
/// `¬x∧¬y` into a flag qubit. The product of the two original swaps is
/// controlled on `P∧(x⊕y)`, so a merge is taken only when `P∧x∧y` holds on
/// no admissible pattern of `constraint`. The second swap must commute past
/// every gate between the two.
///
/// The merged form trades one swap for two MCXs on a flag qubit, so it can
/// add layers when the original swaps already ran side by side.
pub fn peephole_collapse(c: &Circuit, constraint: &DickeConstraint, policy: FlagPolicy) -> Result<Circuit> {
    for q in &constraint.ancillae {
        if q.0 >= c.num_qubits() {
            return Err(Error::QubitOutOfRange {
                qubit: q.0,
                num_qubits: c.num_qubits(),
            });
        }
    }
    if constraint.ancillae.len() > 63 || constraint.weight > constraint.ancillae.len() {
        return Err(Error::InvalidOptions(format!(
            "Dicke constraint of weight {} over {} ancillae",
            constraint.weight,
            constraint.ancillae.len()
        )));
    }

    let mut builder = c.to_builder();
    let mut gates = std::mem::take(&mut builder.gates);
    let mut shared_flag: Option<QubitId> = None;

    let mut i = 0;
    while i < gates.len() {
        let gi = &gates[i];
        if gi.kind() != GateKind::BlockSwap || gi.controls().is_empty() {
            i += 1;
            continue;
        }
        let mut merged = None;
        for j in i + 1..gates.len() {
            let gj = &gates[j];
            if gj.kind() != GateKind::BlockSwap || !same_blocks(gi, gj) {
                continue;
            }
            let Some((common, x, y)) = split_single_difference(gi.controls(), gj.controls()) else {
                continue;
            };
            let mut both = common.clone();
            both.extend([x, y]);
            if constraint.satisfiable(&both) != Some(false)
                || constraint.satisfiable(gi.controls()).is_none()
                || constraint.satisfiable(gj.controls()).is_none()
            {
                continue;
            }
            if !gates[i + 1..j].iter().all(|g| g.commutes_with(gj)) {
                continue;
            }
            let flag = match (policy, shared_flag) {
                (FlagPolicy::Reuse, Some(f)) => f,
                _ => QubitId(builder.num_qubits),
            };
            let compute = Gate::mcx(vec![x.flipped(), y.flipped()], flag.0).with_label("collapse");
            let mut swap_ctrls = common;
            swap_ctrls.push(Control {
                qubit: flag,
                polarity: Polarity::Open,
            });
            let (a, b) = gi.blocks();
            let mut swap = Gate::block_swap(swap_ctrls, a, b);
            if let Some(l) = gi.label() {
                swap = swap.with_label(l);
            }
            let mut candidate = Vec::with_capacity(gates.len() + 1);
            candidate.extend_from_slice(&gates[..i]);
            candidate.extend([compute.clone(), swap, compute]);
            candidate.extend_from_slice(&gates[i + 1..j]);
            candidate.extend_from_slice(&gates[j + 1..]);
            merged = Some((candidate, flag));
            break;
        }
        if let Some((candidate, flag)) = merged {
            if flag.0 == builder.num_qubits {
                let name = format!("w{}", next_work_index(&builder));
                builder.add_qubit(name);
                shared_flag = Some(flag);
            }
            gates = candidate;
            // Skip the compute gate; the merged swap carries a flag control
            // outside the constraint and cannot merge again.
            i += 2;
        } else {
            i += 1;
        }
    }
    builder.gates = gates;
    Ok(builder.build())
}

enum Segment<T> {
    Units(T),
    Other(Gate),
}

/// One controlled swap together with the gates that prepare its control.
#[derive(Clone, Debug)]
struct SwapUnit {
    /// MCXs computing the unit's predicate; empty for a bare swap, whose
    /// own controls become the predicate.
    compute: Vec<Gate>,
    swap: Gate,
    /// Qubits read when computing the predicate.
    reads: BTreeSet<QubitId>,
    span: usize,
}

impl SwapUnit {
    fn swap_targets(&self) -> BTreeSet<QubitId> {
        self.swap.targets().iter().copied().collect()
    }

    /// Gates computing this unit's predicate into `flag`.
    fn computes_into(&self, flag: QubitId) -> Vec<Gate> {
        if self.compute.is_empty() {
            let mut g = Gate::mcx(self.swap.controls().to_vec(), flag.0);
            if let Some(l) = self.swap.label() {
                g = g.with_label(l);
            }
            vec![g]
        } else {
            let old = self.compute[0].targets()[0];
            self.compute
                .iter()
                .map(|g| g.remapped(|q| if q == old { flag } else { q }))
                .collect()
        }
    }

    fn swap_on(&self, flag: QubitId) -> Gate {
        let (a, b) = self.swap.blocks();
        let mut g = Gate::block_swap(vec![Control::closed(flag.0)], a, b);
        if let Some(l) = self.swap.label() {
            g = g.with_label(l);
        }
        g
    }
}

fn same_gate_multiset(a: &[Gate], b: &[Gate]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|g| {
        b.iter().enumerate().any(|(k, h)| {
            if !used[k] && g == h {
                used[k] = true;
                true
            } else {
                false
            }
        })
    })
}

/// Recognizes a swap unit starting at `p`: either a bare controlled block
/// swap, or `MCX… → w`, a swap controlled only on `w`, and the same MCXs
/// again.
fn parse_unit(gates: &[Gate], p: usize) -> Option<SwapUnit> {
    let g = &gates[p];
    if g.kind() == GateKind::BlockSwap && !g.controls().is_empty() {
        return Some(SwapUnit {
            compute: vec![],
            swap: g.clone(),
            reads: g.controls().iter().map(|c| c.qubit).collect(),
            span: 1,
        });
    }
    if g.kind() != GateKind::Mcx {
        return None;
    }
    let w = g.targets()[0];
    let r = gates[p..]
        .iter()
        .take_while(|h| h.kind() == GateKind::Mcx && h.targets()[0] == w)
        .count();
    let swap = gates.get(p + r)?;
    let flag_ctrl = [Control {
        qubit: w,
        polarity: Polarity::Closed,
    }];
    if swap.kind() != GateKind::BlockSwap || swap.controls() != flag_ctrl {
        return None;
    }
    let compute = &gates[p..p + r];
    let uncompute = gates.get(p + r + 1..p + 2 * r + 1)?;
    if !same_gate_multiset(compute, uncompute) {
        return None;
    }
    let reads = compute
        .iter()
        .flat_map(|h| h.controls().iter().map(|c| c.qubit))
        .collect();
    Some(SwapUnit {
        compute: compute.to_vec(),
        swap: swap.clone(),
        reads,
        span: 2 * r + 1,
    })
}

/// Groups consecutive controlled swaps on pairwise-disjoint slots, up to
/// `extra` per group, and fires each group in one layer: every member's
/// predicate is computed into its own fresh work qubit, the swaps run
/// singly controlled, then the predicates are uncomputed. Members must not
/// read qubits that another member swaps. Returns the input unchanged when
/// no group of two or more forms, or when the rewrite would not be
/// shallower or equal in depth.
pub fn parallelize(c: &Circuit, extra: usize) -> Result<Circuit> {
    if extra < 2 {
        return Ok(c.clone());
    }
    let gates = c.gates();
    let mut items: Vec<Segment<SwapUnit>> = Vec::new();
    let mut p = 0;
    while p < gates.len() {
        match parse_unit(gates, p) {
            Some(u) => {
                p += u.span;
                items.push(Segment::Units(u));
            }
            None => {
                items.push(Segment::Other(gates[p].clone()));
                p += 1;
            }
        }
    }

    let mut groups: Vec<Segment<Vec<SwapUnit>>> = Vec::new();
    for item in items {
        match item {
            Segment::Other(g) => groups.push(Segment::Other(g)),
            Segment::Units(u) => {
                let fits = match groups.last() {
                    Some(Segment::Units(group)) if group.len() < extra => group.iter().all(|v| {
                        let (ut, vt) = (u.swap_targets(), v.swap_targets());
                        ut.is_disjoint(&vt) && u.reads.is_disjoint(&vt) && v.reads.is_disjoint(&ut)
                    }),
                    _ => false,
                };
                if fits {
                    if let Some(Segment::Units(group)) = groups.last_mut() {
                        group.push(u);
                    }
                } else {
                    groups.push(Segment::Units(vec![u]));
                }
            }
        }
    }

    let widest = groups
        .iter()
        .filter_map(|g| match g {
            Segment::Units(units) => Some(units.len()),
            Segment::Other(_) => None,
        })
        .max()
        .unwrap_or(0);
    if widest < 2 {
        return Ok(c.clone());
    }

    let mut builder = c.to_builder();
    builder.gates.clear();
    let first = next_work_index(&builder);
    let flags: Vec<QubitId> = (0..widest)
        .map(|k| builder.add_qubit(format!("w{}", first + k)))
        .collect();
    for group in groups {
        match group {
            Segment::Other(g) => builder.gates.push(g),
            Segment::Units(units) if units.len() == 1 => {
                let u = &units[0];
                builder.gates.extend(u.compute.iter().cloned());
                builder.gates.push(u.swap.clone());
                builder.gates.extend(u.compute.iter().cloned());
            }
            Segment::Units(units) => {
                for (u, f) in units.iter().zip(&flags) {
                    builder.gates.extend(u.computes_into(*f));
                }
                for (u, f) in units.iter().zip(&flags) {
                    builder.gates.push(u.swap_on(*f));
                }
                for (u, f) in units.iter().zip(&flags) {
                    builder.gates.extend(u.computes_into(*f));
                }
            }
        }
    }
    let out = builder.build();
    for g in out.gates() {
        g.validate(out.num_qubits())?;
    }
    if metrics(&out).depth > metrics(c).depth {
        return Ok(c.clone());
    }
    Ok(out)
}
