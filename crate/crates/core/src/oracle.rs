//! Classical reference states.
//!
//! Everything here is brute force on purpose: determinants are expanded
//! over all permutations and the antisymmetrized state is built term by
//! term, without using any of the circuit machinery it is meant to check.
//!
//! A slot holds the value `orbital | side << (n-1)` in its `n` qubits, and
//! slot `r` (0-based) starts at qubit `r*n`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::AntisymConfig;
use crate::qstate::{QubitId, StateVector};

/// One Slater determinant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlaterSpec {
    pub orbitals: Vec<usize>,
    /// 0 for the target, 1 for the projectile.
    pub side: u8,
}

/// All permutations of `0..p` with their signs, identity first.
pub fn permutations_with_sign(p: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut perms = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; p], &mut perms);
    perms
        .into_iter()
        .map(|perm| {
            let sign = inversion_sign(&perm);
            (perm, sign)
        })
        .collect()
}

fn inversion_sign<T: Ord>(v: &[T]) -> f64 {
    let inversions = (0..v.len())
        .flat_map(|i| (i + 1..v.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| v[i] > v[j])
        .count();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_orbitals(orbitals: &[usize], n: usize) -> Result<()> {
    let bits = n.saturating_sub(1);
    for (i, &o) in orbitals.iter().enumerate() {
        if bits >= usize::BITS as usize || o >> bits != 0 {
            return Err(Error::OrbitalOutOfRange { orbital: o, bits });
        }
        if orbitals[..i].contains(&o) {
            return Err(Error::DuplicateOrbital(o));
        }
    }
    Ok(())
}

fn slot_index(values: &[usize], n: usize) -> usize {
    values.iter().enumerate().map(|(r, v)| v << (r * n)).sum()
}

/// `(1/√P!) Σ_π sgn(π) |φ_{π(1)}⟩…|φ_{π(P)}⟩` on `P·n` qubits.
pub fn slater_state(spec: &SlaterSpec, n: usize) -> Result<StateVector> {
    check_orbitals(&spec.orbitals, n)?;
    if spec.side > 1 {
        return Err(Error::SideConvention(format!("side must be 0 or 1, got {}", spec.side)));
    }
    let p = spec.orbitals.len();
    let mut s = StateVector::zero(p * n)?;
    s.amplitudes_mut()[0] = Complex64::new(0.0, 0.0);
    let side = (spec.side as usize) << (n - 1);
    let norm = 1.0 / (permutations_with_sign(p).len() as f64).sqrt();
    for (perm, sign) in permutations_with_sign(p) {
        let values: Vec<usize> = perm.iter().map(|&i| spec.orbitals[i] | side).collect();
        s.amplitudes_mut()[slot_index(&values, n)] += Complex64::new(sign * norm, 0.0);
    }
    Ok(s)
}

/// Normalized superposition of determinants on one side.
///
/// Terms are canonicalized on construction: orbitals are sorted (folding
/// the permutation sign into the coefficient) and repeated determinants
/// merged, so distinct terms are orthonormal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SubsystemRecord", into = "SubsystemRecord")]
pub struct SubsystemState {
    side: u8,
    particle_count: usize,
    terms: Vec<(Complex64, Vec<usize>)>,
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    coeff: [f64; 2],
    orbitals: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SubsystemRecord {
    side: u8,
    terms: Vec<TermRecord>,
}

impl TryFrom<SubsystemRecord> for SubsystemState {
    type Error = Error;

    fn try_from(r: SubsystemRecord) -> Result<Self> {
        let terms = r
            .terms
            .into_iter()
            .map(|t| (Complex64::new(t.coeff[0], t.coeff[1]), t.orbitals))
            .collect();
        SubsystemState::new(r.side, terms)
    }
}

impl From<SubsystemState> for SubsystemRecord {
    fn from(s: SubsystemState) -> Self {
        SubsystemRecord {
            side: s.side,
            terms: s
                .terms
                .into_iter()
                .map(|(c, orbitals)| TermRecord {
                    coeff: [c.re, c.im],
                    orbitals,
                })
                .collect(),
        }
    }
}

impl SubsystemState {
    pub fn new(side: u8, terms: Vec<(Complex64, Vec<usize>)>) -> Result<Self> {
        if side > 1 {
            return Err(Error::SideConvention(format!("side must be 0 or 1, got {side}")));
        }
        let particle_count = terms
            .first()
            .map(|t| t.1.len())
            .ok_or_else(|| Error::Parse("subsystem state without terms".into()))?;
        let mut merged: std::collections::BTreeMap<Vec<usize>, Complex64> = Default::default();
        for (c, orbitals) in terms {
            if orbitals.len() != particle_count {
                return Err(Error::Parse(format!(
                    "terms mix {} and {} particles",
                    particle_count,
                    orbitals.len()
                )));
            }
            if particle_count == 0 {
                return Err(Error::Parse("determinant without particles".into()));
            }
            check_orbitals(&orbitals, usize::BITS as usize - 1)?;
            let sign = inversion_sign(&orbitals);
            let mut sorted = orbitals;
            sorted.sort_unstable();
            *merged.entry(sorted).or_default() += c * sign;
        }
        let norm = merged.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= 1e-12 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| c.norm() > 1e-15 * norm)
            .map(|(o, c)| (c / norm, o))
            .collect();
        Ok(SubsystemState {
            side,
            particle_count,
            terms,
        })
    }

    pub fn determinant(side: u8, orbitals: Vec<usize>) -> Result<Self> {
        Self::new(side, vec![(Complex64::new(1.0, 0.0), orbitals)])
    }

    pub fn side(&self) -> u8 {
        self.side
    }

    pub fn particle_count(&self) -> usize {
        self.particle_count
    }

    /// Canonical terms: sorted orbitals, unit total weight.
    pub fn terms(&self) -> &[(Complex64, Vec<usize>)] {
        &self.terms
    }

    pub fn check_fits(&self, n: usize) -> Result<()> {
        self.terms.iter().try_for_each(|(_, o)| check_orbitals(o, n))
    }

    /// Statevector on `particle_count · n` qubits.
    pub fn state_vector(&self, n: usize) -> Result<StateVector> {
        self.check_fits(n)?;
        let mut out = StateVector::zero(self.particle_count * n)?;
        out.amplitudes_mut()[0] = Complex64::new(0.0, 0.0);
        for (c, orbitals) in &self.terms {
            let det = slater_state(
                &SlaterSpec {
                    orbitals: orbitals.clone(),
                    side: self.side,
                },
                n,
            )?;
            for (dst, a) in out.amplitudes_mut().iter_mut().zip(det.amplitudes()) {
                *dst += c * a;
            }
        }
        Ok(out)
    }

    /// Superposition of 1 to `max_terms` distinct random determinants with
    /// complex Gaussian coefficients.
    pub fn random<R: Rng>(rng: &mut R, side: u8, particles: usize, n: usize, max_terms: usize) -> Result<Self> {
        let orbitals = 1usize << (n - 1);
        if particles == 0 || particles > orbitals {
            return Err(Error::InvalidConfig(format!(
                "{particles} particles do not fit {orbitals} orbitals"
            )));
        }
        let wanted = rng.gen_range(1..=max_terms.max(1));
        let mut sets: Vec<Vec<usize>> = Vec::new();
        // bounded retries; small orbital spaces may have fewer distinct sets
        for _ in 0..wanted * 16 {
            if sets.len() == wanted {
                break;
            }
            let mut set = rand::seq::index::sample(rng, orbitals, particles).into_vec();
            set.sort_unstable();
            if !sets.contains(&set) {
                sets.push(set);
            }
        }
        let terms = sets
            .into_iter()
            .map(|set| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                (Complex64::new(re, im), set)
            })
            .collect();
        Self::new(side, terms)
    }
}

/// Seeded random inputs for `cfg`: target on side 0, projectile on side 1,
/// each a superposition of up to three determinants.
pub fn seeded_inputs(cfg: &AntisymConfig, seed: u64) -> Result<(SubsystemState, SubsystemState)> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.qubits_per_particle;
    let t = SubsystemState::random(&mut rng, 0, cfg.n_target, n, 3)?;
    let p = SubsystemState::random(&mut rng, 1, cfg.n_projectile, n, 3)?;
    Ok((t, p))
}

/// Full blocks of `count` consecutive `n`-qubit slots starting at qubit 0.
pub fn slot_blocks(count: usize, n: usize) -> Vec<Vec<QubitId>> {
    (0..count)
        .map(|s| (s * n..(s + 1) * n).map(QubitId).collect())
        .collect()
}

/// `max_{i<j} ‖P_ij ψ + ψ‖` over the given slot blocks, where `P_ij`
/// exchanges blocks `i` and `j`.
pub fn antisymmetry_residual(state: &StateVector, slots: &[Vec<QubitId>]) -> Result<f64> {
    for b in slots {
        for q in b {
            state.check_qubit(*q)?;
        }
        if b.len() != slots[0].len() {
            return Err(Error::BlockWidthMismatch {
                left: slots[0].len(),
                right: b.len(),
            });
        }
    }
    let amps = state.amplitudes();
    let mut worst = 0.0f64;
    for i in 0..slots.len() {
        for j in i + 1..slots.len() {
            let ranks: Vec<(usize, usize)> = slots[i]
                .iter()
                .zip(&slots[j])
                .map(|(a, b)| (a.0, b.0))
                .collect();
            let partner = |x: usize| {
                ranks.iter().fold(x, |y, &(a, b)| {
                    let (ba, bb) = (x >> a & 1, x >> b & 1);
                    (y & !(1 << a) & !(1 << b)) | (bb << a) | (ba << b)
                })
            };
            let partials: Vec<f64> = amps
                .par_chunks(1 << 14)
                .enumerate()
                .map(|(ci, chunk)| {
                    let base = ci << 14;
                    chunk
                        .iter()
                        .enumerate()
                        .map(|(r, a)| (amps[partner(base + r)] + a).norm_sqr())
                        .sum::<f64>()
                })
                .collect();
            worst = worst.max(partials.into_iter().sum::<f64>().sqrt());
        }
    }
    Ok(worst)
}

fn check_pair(target: &SubsystemState, projectile: &SubsystemState, cfg: &AntisymConfig) -> Result<()> {
    cfg.validate()?;
    if target.side != 0 || projectile.side != 1 {
        return Err(Error::SideConvention(format!(
            "target must be on side 0 and projectile on side 1, got {} and {}",
            target.side, projectile.side
        )));
    }
    if target.particle_count != cfg.n_target || projectile.particle_count != cfg.n_projectile {
        return Err(Error::InvalidConfig(format!(
            "inputs hold {} and {} particles, configuration expects {} and {}",
            target.particle_count, projectile.particle_count, cfg.n_target, cfg.n_projectile
        )));
    }
    target.check_fits(cfg.qubits_per_particle)?;
    projectile.check_fits(cfg.qubits_per_particle)
}

/// `(1/√N_perm) Σ_S (-1)^{k(S)} (product state with the projectile moved
/// into slots S)`, summed over every weight-`N_p` slot set `S`. The move is
/// the sorted-rank matching of target slots in `S` with projectile slots
/// outside it, and `k(S)` counts the target slots in `S`.
pub fn oracle_antisymmetrize(
    target: &SubsystemState,
    projectile: &SubsystemState,
    cfg: &AntisymConfig,
) -> Result<StateVector> {
    check_pair(target, projectile, cfg)?;
    let (nt, np, n) = (cfg.n_target, cfg.n_projectile, cfg.qubits_per_particle);
    let m = nt + np;
    let sets: Vec<usize> = (0usize..1 << m)
        .filter(|s| s.count_ones() as usize == np)
        .collect();
    let perms_t = permutations_with_sign(nt);
    let perms_p = permutations_with_sign(np);
    let scale = 1.0 / ((perms_t.len() * perms_p.len() * sets.len()) as f64).sqrt();
    let side = 1usize << (n - 1);

    let mut out = StateVector::zero(m * n)?;
    out.amplitudes_mut()[0] = Complex64::new(0.0, 0.0);
    let amps = out.amplitudes_mut();
    let mut values = vec![0usize; m];
    for (ct, ot) in &target.terms {
        for (cp, op) in &projectile.terms {
            let coeff = ct * cp * scale;
            for &s in &sets {
                let incoming: Vec<usize> = (0..nt).filter(|i| s >> i & 1 == 1).collect();
                let outgoing: Vec<usize> = (nt..m).filter(|j| s >> j & 1 == 0).collect();
                let coset_sign = if incoming.len().is_multiple_of(2) { 1.0 } else { -1.0 };
                for (pt, st) in &perms_t {
                    for (pp, sp) in &perms_p {
                        for r in 0..nt {
                            values[r] = ot[pt[r]];
                        }
                        for r in 0..np {
                            values[nt + r] = op[pp[r]] | side;
                        }
                        for (a, b) in incoming.iter().zip(&outgoing) {
                            values.swap(*a, *b);
                        }
                        amps[slot_index(&values, n)] += coeff * (coset_sign * st * sp);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Independent check: the normalized signed sum over all `(N_T+N_p)!`
/// orderings of the combined orbital list. Inputs must be single
/// determinants.
pub fn oracle_full_permutation_check(
    target: &SubsystemState,
    projectile: &SubsystemState,
    cfg: &AntisymConfig,
) -> Result<StateVector> {
    check_pair(target, projectile, cfg)?;
    if target.terms.len() != 1 || projectile.terms.len() != 1 {
        return Err(Error::NotDeterminant);
    }
    let n = cfg.qubits_per_particle;
    let (ct, ot) = &target.terms[0];
    let (cp, op) = &projectile.terms[0];
    let list: Vec<usize> = ot
        .iter()
        .copied()
        .chain(op.iter().map(|o| o | 1 << (n - 1)))
        .collect();
    let m = list.len();
    let perms = permutations_with_sign(m);
    let coeff = ct * cp / (perms.len() as f64).sqrt();
    let mut out = StateVector::zero(m * n)?;
    out.amplitudes_mut()[0] = Complex64::new(0.0, 0.0);
    let amps = out.amplitudes_mut();
    for (perm, sign) in perms {
        let values: Vec<usize> = perm.iter().map(|&i| list[i]).collect();
        amps[slot_index(&values, n)] += coeff * sign;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::fidelity;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn permutation_signs() {
        let p = permutations_with_sign(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], (vec![0, 1, 2], 1.0));
        assert_eq!(p.iter().map(|x| x.1).sum::<f64>(), 0.0);
        assert_eq!(inversion_sign(&[1, 0, 2]), -1.0);
        assert_eq!(inversion_sign(&[2, 0, 1]), 1.0);
    }

    #[test]
    fn single_particle_determinant() {
        let s = slater_state(&SlaterSpec { orbitals: vec![3], side: 1 }, 3).unwrap();
        assert_eq!(s.amplitude(3 | 4), c(1.0));
    }

    #[test]
    fn two_particle_determinant() {
        let s = slater_state(&SlaterSpec { orbitals: vec![0, 1], side: 0 }, 2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // slot 0 = orbital 0, slot 1 = orbital 1 -> index 1 << 2
        assert!((s.amplitude(0b0100) - c(h)).norm() < 1e-15);
        assert!((s.amplitude(0b0001) - c(-h)).norm() < 1e-15);
        assert!(slater_state(&SlaterSpec { orbitals: vec![1, 1], side: 0 }, 2).is_err());
    }

    #[test]
    fn three_particle_determinant_is_antisymmetric() {
        let s = slater_state(&SlaterSpec { orbitals: vec![0, 1, 2], side: 0 }, 3).unwrap();
        let support = s.amplitudes().iter().filter(|a| a.norm() > 0.0).count();
        assert_eq!(support, 6);
        assert!(antisymmetry_residual(&s, &slot_blocks(3, 3)).unwrap() < 1e-12);
    }

    #[test]
    fn residual_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let blocks = slot_blocks(2, 1);
        let sym = StateVector::from_amplitudes(2, vec![c(0.0), c(h), c(h), c(0.0)]).unwrap();
        assert!((antisymmetry_residual(&sym, &blocks).unwrap() - 2.0).abs() < 1e-12);
        let prod = StateVector::basis(2, 0b10).unwrap();
        assert!((antisymmetry_residual(&prod, &blocks).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let det = StateVector::from_amplitudes(2, vec![c(0.0), c(h), c(-h), c(0.0)]).unwrap();
        assert!(antisymmetry_residual(&det, &blocks).unwrap() < 1e-12);
    }

    #[test]
    fn one_one_oracle() {
        let cfg = AntisymConfig::new(1, 1, 2);
        let t = SubsystemState::determinant(0, vec![0]).unwrap();
        let p = SubsystemState::determinant(1, vec![1]).unwrap();
        let s = oracle_antisymmetrize(&t, &p, &cfg).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // |t p⟩: slot0 = 0, slot1 = 1|side = 3 -> index 3 << 2
        assert!((s.amplitude(3 << 2) - c(h)).norm() < 1e-15);
        assert!((s.amplitude(3) - c(-h)).norm() < 1e-15);
        let full = oracle_full_permutation_check(&t, &p, &cfg).unwrap();
        assert!(fidelity(&s, &full).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn two_one_matches_three_particle_determinant() {
        let cfg = AntisymConfig::new(2, 1, 2);
        let t = SubsystemState::determinant(0, vec![0, 1]).unwrap();
        let p = SubsystemState::determinant(1, vec![0]).unwrap();
        let s = oracle_antisymmetrize(&t, &p, &cfg).unwrap();
        // orbitals (0, side0), (1, side0), (0, side1) are slot values 0, 1, 2
        let mut direct = StateVector::zero(6).unwrap();
        direct.amplitudes_mut()[0] = c(0.0);
        for (perm, sign) in permutations_with_sign(3) {
            let idx = slot_index(&perm, 2);
            direct.amplitudes_mut()[idx] = c(sign / 6f64.sqrt());
        }
        assert!(fidelity(&s, &direct).unwrap() > 1.0 - 1e-12);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_two_coset_signs() {
        let cfg = AntisymConfig::new(2, 2, 2);
        let t = SubsystemState::determinant(0, vec![0, 1]).unwrap();
        let p = SubsystemState::determinant(1, vec![0, 1]).unwrap();
        let s = oracle_antisymmetrize(&t, &p, &cfg).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(antisymmetry_residual(&s, &slot_blocks(4, 2)).unwrap() < 1e-12);
        // identity term: slots (0, 1, 2, 3) with sorted orbitals carries +1/√(2!2!6)
        let id = slot_index(&[0, 1, 2, 3], 2);
        assert!((s.amplitude(id) - c(1.0 / 24f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn oracle_rejects_bad_inputs() {
        let cfg = AntisymConfig::new(1, 1, 2);
        let t = SubsystemState::determinant(0, vec![0]).unwrap();
        let p = SubsystemState::determinant(0, vec![1]).unwrap();
        assert!(matches!(oracle_antisymmetrize(&t, &p, &cfg), Err(Error::SideConvention(_))));
        let p2 = SubsystemState::new(1, vec![(c(1.0), vec![0]), (c(1.0), vec![1])]).unwrap();
        let t1 = SubsystemState::determinant(0, vec![1]).unwrap();
        assert_eq!(oracle_full_permutation_check(&t1, &p2, &cfg), Err(Error::NotDeterminant));
    }

    #[test]
    fn subsystem_canonicalization() {
        let s = SubsystemState::new(0, vec![(c(1.0), vec![1, 0]), (c(1.0), vec![0, 1])]);
        // the two terms cancel
        assert!(matches!(s, Err(Error::NotNormalized { .. })));
        let s = SubsystemState::new(0, vec![(c(3.0), vec![1, 0]), (c(4.0), vec![0, 2])]).unwrap();
        assert_eq!(s.terms()[0], (c(-0.6), vec![0, 1]));
        let v = s.state_vector(3).unwrap();
        assert!((v.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"side":1,"terms":[{"coeff":[1.0,0.0],"orbitals":[2,0]}]}"#;
        let s: SubsystemState = serde_json::from_str(text).unwrap();
        assert_eq!(s.terms()[0].1, vec![0, 2]);
        assert_eq!(s.terms()[0].0, c(-1.0));
        let back: SubsystemState = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<SubsystemState>(r#"{"side":0,"terms":[]}"#).is_err());
    }

    #[test]
    fn seeded_inputs_are_reproducible() {
        let cfg = AntisymConfig::new(3, 2, 3);
        let a = seeded_inputs(&cfg, 7).unwrap();
        let b = seeded_inputs(&cfg, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.0.particle_count(), 3);
        assert_eq!(a.1.side(), 1);
    }
}
