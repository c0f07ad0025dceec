//! Minimum disjoint cover of a pattern set by conjunctive terms.
//!
//! Only patterns of the fixed Dicke weight exist, so a term may match
//! arbitrary patterns of other weights ("don't cares"). Terms are scored
//! by the set of weight-k patterns they select; sets are `u128` bitmasks
//! over the pattern list, which caps the register at `C(m, k) <= 128`.

use std::collections::HashMap;

use super::Literal;

#[derive(Clone, Debug)]
pub(super) struct Implicant {
    pub care: u64,
    pub value: u64,
    pub set: u128,
}

impl Implicant {
    fn literal_count(&self) -> u32 {
        self.care.count_ones()
    }

    pub fn literals(&self, m: usize) -> Vec<Literal> {
        (0..m)
            .filter(|i| self.care >> i & 1 == 1)
            .map(|i| Literal {
                ancilla: i + 1,
                value: self.value >> i & 1 == 1,
            })
            .collect()
    }
}

/// Every distinct nonempty pattern set selectable by a term of at most
/// `budget` literals, each kept with its cheapest term.
pub(super) fn implicants(m: usize, patterns: &[u64], budget: usize) -> Vec<Implicant> {
    let mut best: HashMap<u128, Implicant> = HashMap::new();
    for care in 0u64..(1u64 << m) {
        if care.count_ones() as usize > budget {
            continue;
        }
        // enumerate value ⊆ care
        let mut value = care;
        loop {
            let set = patterns
                .iter()
                .enumerate()
                .filter(|(_, p)| *p & care == value)
                .fold(0u128, |acc, (i, _)| acc | 1u128 << i);
            if set != 0 {
                let cand = Implicant { care, value, set };
                let replace = match best.get(&set) {
                    None => true,
                    Some(old) => {
                        (cand.literal_count(), care, value) < (old.literal_count(), old.care, old.value)
                    }
                };
                if replace {
                    best.insert(set, cand);
                }
            }
            if value == 0 {
                break;
            }
            value = (value - 1) & care;
        }
    }
    let mut out: Vec<Implicant> = best.into_values().collect();
    out.sort_by_key(|i| (std::cmp::Reverse(i.set.count_ones()), i.literal_count(), i.care, i.value));
    out
}

/// Exact minimum disjoint cover of `target` using implicants contained in
/// it. Ties on term count are broken by total literal count, then by the
/// deterministic implicant order. `None` if `target` cannot be covered.
pub(super) fn min_cover(target: u128, all: &[Implicant]) -> Option<Vec<Implicant>> {
    let usable: Vec<&Implicant> = all.iter().filter(|i| i.set & !target == 0).collect();
    let mut memo: HashMap<u128, Option<(u32, u32, usize)>> = HashMap::new();
    solve(target, &usable, &mut memo)?;
    let mut out = Vec::new();
    let mut rest = target;
    while rest != 0 {
        let (_, _, pick) = memo[&rest].expect("solved state");
        out.push(usable[pick].clone());
        rest &= !usable[pick].set;
    }
    Some(out)
}

fn solve(
    rest: u128,
    usable: &[&Implicant],
    memo: &mut HashMap<u128, Option<(u32, u32, usize)>>,
) -> Option<(u32, u32)> {
    if rest == 0 {
        return Some((0, 0));
    }
    if let Some(hit) = memo.get(&rest) {
        return hit.map(|(c, l, _)| (c, l));
    }
    let low = rest & rest.wrapping_neg();
    let mut best: Option<(u32, u32, usize)> = None;
    for (idx, imp) in usable.iter().enumerate() {
        if imp.set & low == 0 || imp.set & !rest != 0 {
            continue;
        }
        if let Some((c, l)) = solve(rest & !imp.set, usable, memo) {
            let cand = (c + 1, l + imp.literal_count(), idx);
            if best.is_none_or(|b| (cand.0, cand.1) < (b.0, b.1)) {
                best = Some(cand);
            }
        }
    }
    memo.insert(rest, best);
    best.map(|(c, l, _)| (c, l))
}
