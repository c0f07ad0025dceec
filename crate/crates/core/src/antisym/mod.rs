//! Antisymmetrization of a target and a projectile subsystem.
//!
//! An ancilla pattern `b` (one bit per slot, weight `N_p`) names the slots
//! that should hold projectile states. The swap stage realizes, on every
//! pattern, a set of disjoint target/projectile exchanges moving the
//! projectile states there. The phase stage puts `(-1)^k` on the branch,
//! `k` being the number of ones among the first `N_T` bits, which equals
//! the number of exchanges. The uncompute stage clears `a_i` using the side
//! bit of whatever now sits in slot `i`.
//!
//! Patterns are stored as integers with bit `i-1` holding `a_i`.

mod build;
mod cover;
mod run;
mod schedule;

pub use build::{build_full_circuit, AntisymCircuit, BuildOptions, StageSpans};
pub use run::{run_antisymmetrization, Diagnostics, RunOutput};
pub use schedule::{
    corrupt_schedule, generate_reference_schedule, generate_shared_schedule,
    generate_shared_schedule_with, Compilation, Matching, SharedOptions,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::AntisymConfig;

/// All `m`-bit integers with exactly `k` ones, in increasing order.
pub fn weight_patterns(m: usize, k: usize) -> Vec<u64> {
    if k > m || m > 63 {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut v: u64 = (1u64 << k) - 1;
    let limit = 1u64 << m;
    while v < limit {
        out.push(v);
        // Gosper's hack: next integer with the same popcount
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    out
}

fn binomial(n: u128, k: u128) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 1..=k {
        // r holds C(n-k+i-1, i-1); the division is exact
        r = r.checked_mul(n - k + i).ok_or(Error::Overflow)? / i;
    }
    Ok(r)
}

/// `C(N_T+N_p, N_p)`: distinct slot assignments of the projectile states.
pub fn n_perm_binomial(n_target: usize, n_projectile: usize) -> Result<u128> {
    if n_target == 0 || n_projectile == 0 {
        return Err(Error::InvalidConfig("particle counts must be positive".into()));
    }
    binomial((n_target + n_projectile) as u128, n_projectile as u128)
}

/// `1 + Σ_κ C(N_T,κ)·C(N_p,κ)`, grouping assignments by the number κ of
/// exchanged particles.
pub fn n_perm_sum(n_target: usize, n_projectile: usize) -> Result<u128> {
    if n_target == 0 || n_projectile == 0 || n_projectile > n_target {
        return Err(Error::InvalidConfig(format!(
            "need 1 <= N_p <= N_T, got N_T={n_target}, N_p={n_projectile}"
        )));
    }
    (1..=n_projectile as u128).try_fold(1u128, |acc, kappa| {
        let term = binomial(n_target as u128, kappa)?
            .checked_mul(binomial(n_projectile as u128, kappa)?)
            .ok_or(Error::Overflow)?;
        acc.checked_add(term).ok_or(Error::Overflow)
    })
}

/// Number of ones of `pattern` on the target slots.
pub fn target_weight(pattern: u64, n_target: usize) -> usize {
    (pattern & ((1u64 << n_target) - 1)).count_ones() as usize
}

/// The pattern that leaves every particle in place.
pub fn identity_pattern(cfg: &AntisymConfig) -> u64 {
    ((1u64 << cfg.n_projectile) - 1) << cfg.n_target
}

/// `a_1 … a_m` as a string of 0/1.
pub fn pattern_string(pattern: u64, m: usize) -> String {
    (0..m)
        .map(|i| if pattern >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Condition on one Dicke ancilla, `a_{ancilla} = value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    /// 1-based ancilla index.
    pub ancilla: usize,
    pub value: bool,
}

impl Literal {
    pub fn holds(&self, pattern: u64) -> bool {
        (pattern >> (self.ancilla - 1) & 1 == 1) == self.value
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Predicate {
    /// Conjunction of literals, compiled straight into swap controls.
    Term { literals: Vec<Literal> },
    /// Disjunction of mutually exclusive conjunctions, compiled into a
    /// flag qubit that controls a single swap.
    AnyOf { terms: Vec<Vec<Literal>> },
}

impl Predicate {
    pub fn holds(&self, pattern: u64) -> bool {
        match self {
            Predicate::Term { literals } => literals.iter().all(|l| l.holds(pattern)),
            Predicate::AnyOf { terms } => terms
                .iter()
                .any(|t| t.iter().all(|l| l.holds(pattern))),
        }
    }

    fn literals(&self) -> Box<dyn Iterator<Item = &Literal> + '_> {
        match self {
            Predicate::Term { literals } => Box::new(literals.iter()),
            Predicate::AnyOf { terms } => Box::new(terms.iter().flatten()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapOp {
    /// Target-side slot, in `1..=N_T`.
    pub slot_a: usize,
    /// Projectile-side slot, in `N_T+1..=N_T+N_p`.
    pub slot_b: usize,
    pub predicate: Predicate,
    pub order: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Reference,
    Shared,
    Parallel,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reference" => Ok(Variant::Reference),
            "shared" => Ok(Variant::Shared),
            "parallel" => Ok(Variant::Parallel),
            other => Err(Error::InvalidOptions(format!("unknown variant {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapSchedule {
    pub config: AntisymConfig,
    pub variant: Variant,
    pub ops: Vec<SwapOp>,
}

impl SwapSchedule {
    /// Structural checks: slot ranges, ancilla indices, dense ordering.
    pub fn check(&self) -> Result<()> {
        let (nt, m) = (self.config.n_target, self.config.particles());
        for (k, op) in self.ops.iter().enumerate() {
            if op.order != k {
                return Err(Error::InvalidConfig(format!("op {k} has order {}", op.order)));
            }
            if !(1..=nt).contains(&op.slot_a) || !(nt + 1..=m).contains(&op.slot_b) {
                return Err(Error::InvalidConfig(format!(
                    "op {k} swaps slots {} and {}",
                    op.slot_a, op.slot_b
                )));
            }
            if let Some(l) = op.predicate.literals().find(|l| !(1..=m).contains(&l.ancilla)) {
                return Err(Error::InvalidConfig(format!(
                    "op {k} references ancilla a{}",
                    l.ancilla
                )));
            }
        }
        Ok(())
    }

    /// Number of distinct slot pairs touched.
    pub fn distinct_pairs(&self) -> usize {
        let set: std::collections::BTreeSet<_> =
            self.ops.iter().map(|o| (o.slot_a, o.slot_b)).collect();
        set.len()
    }
}

/// Outcome of one ancilla pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchReport {
    /// `a_1 … a_m` as 0/1 characters.
    pub pattern: String,
    /// `order` of each op that fired, in schedule order.
    pub fired: Vec<usize>,
    pub final_projectile_slots: Vec<usize>,
    pub parity_ok: bool,
    pub occupancy_ok: bool,
    /// Fired count equals the number of target slots receiving a projectile
    /// state (no exchange is undone later).
    pub minimal: bool,
}

impl BranchReport {
    pub fn passed(&self) -> bool {
        self.parity_ok && self.occupancy_ok
    }
}

/// Classically composes the fired swaps of every weight-`N_p` pattern.
pub fn validate_schedule(s: &SwapSchedule) -> Vec<BranchReport> {
    let nt = s.config.n_target;
    let m = s.config.particles();
    weight_patterns(m, s.config.n_projectile)
        .into_iter()
        .map(|b| {
            // holds_projectile[i-1]: slot i currently holds a projectile state
            let mut holds_projectile: Vec<bool> = (1..=m).map(|i| i > nt).collect();
            let mut fired = Vec::new();
            for op in &s.ops {
                if op.predicate.holds(b) {
                    holds_projectile.swap(op.slot_a - 1, op.slot_b - 1);
                    fired.push(op.order);
                }
            }
            let final_projectile_slots: Vec<usize> = (1..=m)
                .filter(|i| holds_projectile[i - 1])
                .collect();
            let wanted: Vec<usize> = (1..=m).filter(|i| b >> (i - 1) & 1 == 1).collect();
            let k = target_weight(b, nt);
            BranchReport {
                pattern: pattern_string(b, m),
                parity_ok: fired.len() % 2 == k % 2,
                minimal: fired.len() == k,
                occupancy_ok: final_projectile_slots == wanted,
                fired,
                final_projectile_slots,
            }
        })
        .collect()
}

pub fn schedule_is_valid(reports: &[BranchReport]) -> bool {
    reports.iter().all(BranchReport::passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_examples() {
        assert_eq!(n_perm_binomial(2, 2).unwrap(), 6);
        assert_eq!(n_perm_binomial(3, 2).unwrap(), 10);
        assert_eq!(n_perm_binomial(1, 1).unwrap(), 2);
        assert_eq!(n_perm_sum(3, 2).unwrap(), 10);
        assert_eq!(n_perm_sum(2, 2).unwrap(), 6);
        for nt in 1..10 {
            assert_eq!(n_perm_sum(nt, 1).unwrap(), 1 + nt as u128);
        }
        assert!(n_perm_sum(1, 2).is_err());
        assert!(n_perm_binomial(0, 1).is_err());
    }

    #[test]
    fn counting_overflow_is_reported() {
        assert_eq!(n_perm_binomial(200, 100), Err(Error::Overflow));
    }

    #[test]
    fn patterns_are_sorted_and_complete() {
        let p = weight_patterns(4, 2);
        assert_eq!(p, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(weight_patterns(3, 0), vec![0]);
        assert!(weight_patterns(2, 3).is_empty());
        assert_eq!(weight_patterns(8, 4).len(), 70);
    }

    #[test]
    fn pattern_strings() {
        assert_eq!(pattern_string(0b0011, 4), "1100");
        let cfg = AntisymConfig::new(2, 2, 2);
        assert_eq!(pattern_string(identity_pattern(&cfg), 4), "0011");
        assert_eq!(target_weight(0b0101, 2), 1);
    }
}
