//! Swap schedule generation.
//!
//! A schedule is fixed by two choices: which disjoint exchanges realize
//! each pattern (the matching), and how the per-pair firing sets are
//! written as predicates.
//!
//! The reference schedule uses the canonical sorted-rank matching and one
//! full-register term per exchange, so it costs `Σ_b k(b)` swaps. The
//! shared schedule lets all patterns that exchange the same slot pair share
//! swaps: the firing set of each pair is covered by as few terms as
//! possible, exploiting that only weight-`N_p` patterns occur.

use serde::{Deserialize, Serialize};

use super::cover::{implicants, min_cover};
use super::{
    identity_pattern, weight_patterns, Literal, Predicate, SwapOp, SwapSchedule, Variant,
};
use crate::error::{Error, Result};
use crate::layout::AntisymConfig;

/// Rule choosing the exchanges for a pattern.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Matching {
    /// i-th smallest target slot needing a projectile state paired with
    /// the i-th smallest projectile slot giving one up.
    Canonical,
    /// Target slot `i` pairs with projectile slot `N_T+i` whenever both
    /// need to move; the rest pair by sorted rank. Firing sets become
    /// simpler and need fewer terms.
    #[default]
    DiagonalFirst,
}

/// Predicate form for the shared schedule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compilation {
    /// Product terms up to 8 ancillae, flags above.
    #[default]
    Auto,
    /// One directly controlled swap per term.
    ProductTerms,
    /// One swap per slot pair, controlled by a flag qubit.
    Flags,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharedOptions {
    pub matching: Matching,
    /// Maximum literals per term. `None` picks `N_T+N_p` for equal
    /// subsystems and `N_T-1` otherwise.
    pub control_budget: Option<usize>,
    pub compilation: Compilation,
}

/// Largest register for which terms are minimized exactly.
const MAX_COVER_ANCILLAE: usize = 8;

pub(super) fn matching(rule: Matching, cfg: &AntisymConfig, b: u64) -> Vec<(usize, usize)> {
    let nt = cfg.n_target;
    let m = cfg.particles();
    let bit = |i: usize| b >> (i - 1) & 1 == 1;
    let mut targets: Vec<usize> = (1..=nt).filter(|&i| bit(i)).collect();
    let mut givers: Vec<usize> = (nt + 1..=m).filter(|&j| !bit(j)).collect();
    let mut pairs = Vec::with_capacity(targets.len());
    if rule == Matching::DiagonalFirst {
        targets.retain(|&i| {
            if let Some(pos) = givers.iter().position(|&j| j == nt + i) {
                pairs.push((i, givers.remove(pos)));
                false
            } else {
                true
            }
        });
    }
    pairs.extend(targets.into_iter().zip(givers));
    pairs.sort_unstable();
    pairs
}

fn all_patterns(cfg: &AntisymConfig) -> Vec<u64> {
    weight_patterns(cfg.particles(), cfg.n_projectile)
}

fn full_term(b: u64, m: usize) -> Vec<Literal> {
    (1..=m)
        .map(|i| Literal {
            ancilla: i,
            value: b >> (i - 1) & 1 == 1,
        })
        .collect()
}

/// Closed literals on the ones of `b`; on the weight-`N_p` slice they
/// single out `b`.
fn ones_term(b: u64, m: usize) -> Vec<Literal> {
    full_term(b, m).into_iter().filter(|l| l.value).collect()
}

pub fn generate_reference_schedule(cfg: &AntisymConfig) -> Result<SwapSchedule> {
    cfg.validate()?;
    let m = cfg.particles();
    let id = identity_pattern(cfg);
    let mut ops = Vec::new();
    for b in all_patterns(cfg).into_iter().filter(|&b| b != id) {
        for (a, t) in matching(Matching::Canonical, cfg, b) {
            ops.push(SwapOp {
                slot_a: a,
                slot_b: t,
                predicate: Predicate::Term {
                    literals: full_term(b, m),
                },
                order: ops.len(),
            });
        }
    }
    Ok(SwapSchedule {
        config: *cfg,
        variant: Variant::Reference,
        ops,
    })
}

pub fn generate_shared_schedule(cfg: &AntisymConfig) -> Result<SwapSchedule> {
    generate_shared_schedule_with(cfg, &SharedOptions::default())
}

/// Slot pairs in emission order: targets in chunks of `N_p`; within a chunk
/// each offset round pairs every target with a distinct projectile slot,
/// so each round is a set of slot-disjoint exchanges.
fn pair_order(nt: usize, np: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(nt * np);
    for start in (1..=nt).step_by(np) {
        let chunk: Vec<usize> = (start..=(start + np - 1).min(nt)).collect();
        for d in 0..np {
            for (r, &i) in chunk.iter().enumerate() {
                out.push((i, nt + 1 + (r + d) % np));
            }
        }
    }
    out
}

pub fn generate_shared_schedule_with(cfg: &AntisymConfig, opts: &SharedOptions) -> Result<SwapSchedule> {
    cfg.validate()?;
    let (nt, np, m) = (cfg.n_target, cfg.n_projectile, cfg.particles());
    let patterns = all_patterns(cfg);
    let compilation = match opts.compilation {
        Compilation::Auto if m <= MAX_COVER_ANCILLAE => Compilation::ProductTerms,
        Compilation::Auto => Compilation::Flags,
        other => other,
    };
    let budget = opts
        .control_budget
        .unwrap_or(if nt == np { m } else { nt - 1 });

    // firing set of every pair, as pattern indices
    let pairs = pair_order(nt, np);
    let mut firing: Vec<Vec<usize>> = vec![Vec::new(); pairs.len()];
    for (idx, &b) in patterns.iter().enumerate() {
        for pr in matching(opts.matching, cfg, b) {
            let k = pairs.iter().position(|p| *p == pr).expect("pair in order");
            firing[k].push(idx);
        }
    }

    let terms: Vec<Vec<Vec<Literal>>> = if m <= MAX_COVER_ANCILLAE {
        let imps = implicants(m, &patterns, budget);
        firing
            .iter()
            .map(|f| {
                let set = f.iter().fold(0u128, |acc, &i| acc | 1u128 << i);
                min_cover(set, &imps)
                    .map(|c| c.iter().map(|imp| imp.literals(m)).collect())
                    .ok_or_else(|| {
                        Error::InvalidOptions(format!(
                            "control budget {budget} cannot express the swap predicates"
                        ))
                    })
            })
            .collect::<Result<_>>()?
    } else {
        firing
            .iter()
            .map(|f| f.iter().map(|&i| ones_term(patterns[i], m)).collect())
            .collect()
    };

    let mut ops = Vec::new();
    let mut emit = |(a, b): (usize, usize), predicate: Predicate| {
        let order = ops.len();
        ops.push(SwapOp {
            slot_a: a,
            slot_b: b,
            predicate,
            order,
        });
    };
    match compilation {
        Compilation::Flags => {
            for (pr, t) in pairs.iter().zip(&terms) {
                emit(*pr, Predicate::AnyOf { terms: t.clone() });
            }
        }
        _ => {
            // single-term pairs first, then the multi-term pairs round by
            // round with alternating direction, so the terms of each pair
            // nest around each other and can be merged later
            for (pr, t) in pairs.iter().zip(&terms) {
                if t.len() == 1 {
                    emit(*pr, Predicate::Term { literals: t[0].clone() });
                }
            }
            let multi: Vec<usize> = (0..pairs.len()).filter(|&k| terms[k].len() > 1).collect();
            let rounds = multi.iter().map(|&k| terms[k].len()).max().unwrap_or(0);
            for r in 0..rounds {
                let mut row: Vec<usize> = multi.iter().copied().filter(|&k| terms[k].len() > r).collect();
                if r % 2 == 1 {
                    row.reverse();
                }
                for k in row {
                    emit(pairs[k], Predicate::Term { literals: terms[k][r].clone() });
                }
            }
        }
    }

    Ok(SwapSchedule {
        config: *cfg,
        variant: Variant::Shared,
        ops,
    })
}

/// Copy of `s` with the first literal of the first op negated. Used to
/// check that validation catches a single wrong control.
pub fn corrupt_schedule(s: &SwapSchedule) -> SwapSchedule {
    let mut out = s.clone();
    if let Some(op) = out.ops.first_mut() {
        let lit = match &mut op.predicate {
            Predicate::Term { literals } => literals.first_mut(),
            Predicate::AnyOf { terms } => terms.first_mut().and_then(|t| t.first_mut()),
        };
        if let Some(l) = lit {
            l.value = !l.value;
        }
    }
    out
}
