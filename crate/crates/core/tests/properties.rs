//! Randomized invariants for the simulator, the IR, Dicke states, schedules
//! and passes.

use antisym_core::antisym::{
    build_full_circuit, generate_reference_schedule, generate_shared_schedule_with, n_perm_binomial, n_perm_sum,
    run_antisymmetrization, schedule_is_valid, validate_schedule, BuildOptions, Compilation, Matching,
    SharedOptions, Variant,
};
use antisym_core::circuit::{metrics, parallelize, Circuit, Gate};
use antisym_core::dicke::{dicke_circuit, DickeSpec};
use antisym_core::layout::AntisymConfig;
use antisym_core::oracle::{antisymmetry_residual, oracle_antisymmetrize, seeded_inputs, slot_blocks, SubsystemState};
use antisym_core::qstate::{fidelity, Control, QubitId, StateVector};
use num_complex::Complex64;
use proptest::prelude::*;

const Q: usize = 5;

fn random_state(seed: u64, q: usize) -> StateVector {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..1 << q)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let mut s = StateVector::from_amplitudes(q, amps).unwrap();
    s.normalize();
    s
}

fn control() -> impl Strategy<Value = (usize, bool)> {
    (0..Q, any::<bool>())
}

/// A valid gate on `Q` qubits. Controls that collide with targets are
/// dropped rather than rejected, and a controlled X is an MCX.
fn gate() -> impl Strategy<Value = Gate> {
    let ctrls = proptest::collection::vec(control(), 0..3);
    (0..6usize, 0..Q, 0..Q, -3.0..3.0f64, ctrls).prop_map(|(kind, a, b, theta, ctrls)| {
        let b = if a == b { (a + 1) % Q } else { b };
        let mut used = vec![a];
        let g = match kind {
            0 => Gate::x(a),
            1 => Gate::z(a),
            2 => Gate::h(a),
            3 => Gate::ry(a, theta),
            4 => Gate::x(a),
            _ => {
                used.push(b);
                Gate::block_swap(vec![], &[QubitId(a)], &[QubitId(b)])
            }
        };
        let mut seen = used.clone();
        let cs: Vec<Control> = ctrls
            .into_iter()
            .filter(|(q, _)| {
                let fresh = !seen.contains(q);
                seen.push(*q);
                fresh
            })
            .map(|(q, bit)| if bit { Control::closed(q) } else { Control::open(q) })
            .collect();
        match (kind, cs.is_empty()) {
            (0 | 4, true) => Gate::x(a),
            (0 | 4, false) => Gate::mcx(cs, a),
            (_, true) => g,
            (_, false) => g.controlled_by(cs),
        }
    })
}

fn close(a: &StateVector, b: &StateVector) -> bool {
    a.amplitudes().iter().zip(b.amplitudes()).all(|(x, y)| (x - y).norm() < 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gate_sequences_preserve_norm(gates in proptest::collection::vec(gate(), 1..100), seed in any::<u64>()) {
        let mut s = random_state(seed, Q);
        let c = Circuit::new(Q, gates, None).unwrap();
        c.simulate(&mut s).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn self_inverse_gates_square_to_identity(g in gate(), seed in any::<u64>()) {
        prop_assume!(!matches!(g.kind(), antisym_core::circuit::GateKind::Ry(_)));
        let before = random_state(seed, Q);
        let mut s = before.clone();
        g.apply(&mut s).unwrap();
        g.apply(&mut s).unwrap();
        prop_assert!(close(&s, &before));
    }

    #[test]
    fn unsatisfied_controls_leave_amplitudes_alone(g in gate(), seed in any::<u64>()) {
        let before = random_state(seed, Q);
        let mut s = before.clone();
        g.apply(&mut s).unwrap();
        for i in 0..1usize << Q {
            if !g.controls().iter().all(|c| c.is_satisfied(i)) {
                prop_assert!((s.amplitude(i) - before.amplitude(i)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn disjoint_gates_commute(a in gate(), b in gate(), seed in any::<u64>()) {
        let qa: Vec<_> = a.qubits().collect();
        prop_assume!(b.qubits().all(|q| !qa.contains(&q)));
        let mut ab = random_state(seed, Q);
        let mut ba = ab.clone();
        a.apply(&mut ab).unwrap();
        b.apply(&mut ab).unwrap();
        b.apply(&mut ba).unwrap();
        a.apply(&mut ba).unwrap();
        prop_assert!(close(&ab, &ba));
        prop_assert!(a.commutes_with(&b));
    }

    #[test]
    fn circuit_json_round_trips(gates in proptest::collection::vec(gate(), 0..20)) {
        let c = Circuit::new(Q, gates, None).unwrap();
        let back: Circuit = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn dicke_state_is_symmetric((m, k) in (2usize..=6).prop_flat_map(|m| (Just(m), 1..=m)), i in 0usize..6, j in 0usize..6) {
        prop_assume!(i < m && j < m && i != j);
        let c = dicke_circuit(DickeSpec::new(m, k).unwrap()).unwrap();
        let mut s = StateVector::zero(m).unwrap();
        c.simulate(&mut s).unwrap();
        let mut t = s.clone();
        t.apply_cswap_block(&[], &[QubitId(i)], &[QubitId(j)]).unwrap();
        prop_assert!(fidelity(&s, &t).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn counting_identity((nt, np) in (1usize..=20).prop_flat_map(|nt| (Just(nt), 1..=nt))) {
        prop_assert_eq!(n_perm_binomial(nt, np).unwrap(), n_perm_sum(nt, np).unwrap());
    }

    #[test]
    fn schedules_are_valid(
        (nt, np) in (1usize..=6).prop_flat_map(|nt| (Just(nt), 1..=nt.min(3))),
        diag in any::<bool>(),
        flags in any::<bool>(),
    ) {
        let cfg = AntisymConfig::new(nt, np, 4);
        let opts = SharedOptions {
            matching: if diag { Matching::DiagonalFirst } else { Matching::Canonical },
            compilation: if flags { Compilation::Flags } else { Compilation::Auto },
            ..Default::default()
        };
        let shared = generate_shared_schedule_with(&cfg, &opts).unwrap();
        prop_assert!(schedule_is_valid(&validate_schedule(&shared)));
        let reference = generate_reference_schedule(&cfg).unwrap();
        prop_assert!(schedule_is_valid(&validate_schedule(&reference)));
    }

    #[test]
    fn parallelize_never_deepens(
        (nt, np) in (1usize..=5).prop_flat_map(|nt| (Just(nt), 1..=nt.min(3))),
        extra in 0usize..4,
    ) {
        let cfg = AntisymConfig::new(nt, np, 4);
        let opts = BuildOptions {
            shared: SharedOptions { compilation: Compilation::Flags, ..Default::default() },
            ..Default::default()
        };
        let region = build_full_circuit(&cfg, Variant::Shared, &opts).unwrap().swap_stage();
        let out = parallelize(&region, extra).unwrap();
        prop_assert!(metrics(&out).depth <= metrics(&region).depth);
    }

    #[test]
    fn oracle_output_is_antisymmetric(seed in any::<u64>(), pick in 0usize..3) {
        let (nt, np, n) = [(2, 1, 2), (2, 2, 3), (3, 1, 3)][pick];
        let cfg = AntisymConfig::new(nt, np, n);
        let (t, p) = seeded_inputs(&cfg, seed).unwrap();
        let s = oracle_antisymmetrize(&t, &p, &cfg).unwrap();
        prop_assert!(antisymmetry_residual(&s, &slot_blocks(nt + np, n)).unwrap() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn passes_preserve_the_output(seed in any::<u64>(), pick in 0usize..3, collapse in any::<bool>()) {
        let (nt, np, n) = [(2, 1, 2), (2, 2, 2), (3, 2, 3)][pick];
        let cfg = AntisymConfig::new(nt, np, n);
        let (t, p) = seeded_inputs(&cfg, seed).unwrap();
        let run = |v: Variant, o: BuildOptions| {
            run_antisymmetrization(&t.state_vector(n).unwrap(), &p.state_vector(n).unwrap(), &cfg, v, &o)
                .unwrap()
                .particle_state()
                .unwrap()
        };
        let base = run(Variant::Shared, BuildOptions::default());
        let opts = BuildOptions { collapse, use_gate_dicke: true, ..Default::default() };
        let rewritten = run(Variant::Parallel, opts);
        prop_assert!(fidelity(&base, &rewritten).unwrap() > 1.0 - 1e-10);
    }

    #[test]
    fn subsystem_json_round_trips(seed in any::<u64>()) {
        let cfg = AntisymConfig::new(3, 2, 3);
        let (t, _) = seeded_inputs(&cfg, seed).unwrap();
        let back: SubsystemState = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        prop_assert!(fidelity(&back.state_vector(3).unwrap(), &t.state_vector(3).unwrap()).unwrap() > 1.0 - 1e-12);
    }
}
