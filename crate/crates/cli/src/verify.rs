//! The `verify` subcommand: counting identities, branch validation,
//! double-oracle agreement and end-to-end fidelity over a configuration
//! sweep.

use std::path::PathBuf;

use antisym_core::antisym::{
    build_full_circuit, corrupt_schedule, generate_reference_schedule, generate_shared_schedule, n_perm_binomial, n_perm_sum,
    run_antisymmetrization, validate_schedule, BuildOptions, SwapSchedule, Variant,
};
use antisym_core::layout::AntisymConfig;
use antisym_core::oracle::{
    antisymmetry_residual, oracle_antisymmetrize, oracle_full_permutation_check, seeded_inputs, slot_blocks,
    SubsystemState,
};
use antisym_core::qstate::{fidelity, max_qubits};
use clap::Args;
use serde::Serialize;

use crate::{to_json, write_file, Failure};

/// Largest register simulated without `--heavy`.
const LIGHT_QUBITS: usize = 22;
const TOL: f64 = 1e-10;

#[derive(Args)]
pub(crate) struct VerifyArgs {
    #[arg(long, default_value_t = 3)]
    max_nt: usize,
    #[arg(long, default_value_t = 2)]
    max_np: usize,
    #[arg(long, default_value_t = 3)]
    max_n: usize,
    /// Seeded superposition inputs per configuration, on top of one
    /// determinant input.
    #[arg(long, default_value_t = 3)]
    trials: u64,
    /// Also run (3,3) with n=3 and any swept register above 22 qubits.
    #[arg(long)]
    heavy: bool,
    /// Corrupt every shared schedule before validating it (test hook).
    #[arg(long, hide = true)]
    corrupt: bool,
    /// Write the JSON report to this path.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    cases: usize,
    /// Runs skipped because the register exceeds the qubit capacity.
    skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_failure: Option<String>,
}

#[derive(Serialize)]
struct VerifyReport {
    passed: bool,
    checks: Vec<Check>,
}

struct Tally {
    cases: usize,
    skipped: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            skipped: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, why: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(why());
        }
    }

    fn finish(self, name: &'static str) -> Check {
        Check {
            name,
            passed: self.first_failure.is_none(),
            cases: self.cases,
            skipped: self.skipped,
            first_failure: self.first_failure,
        }
    }
}

fn min_qubits(nt: usize) -> usize {
    crate::min_qubits(nt)
}

fn pairs(a: &VerifyArgs) -> Vec<(usize, usize)> {
    (1..=a.max_nt)
        .flat_map(|nt| (1..=nt.min(a.max_np)).map(move |np| (nt, np)))
        .collect()
}

fn counting() -> Check {
    let mut t = Tally::new();
    for nt in 1..=12 {
        for np in 1..=nt {
            let (b, s) = (n_perm_binomial(nt, np), n_perm_sum(nt, np));
            t.record(matches!((&b, &s), (Ok(x), Ok(y)) if x == y), || format!("({nt},{np}): {b:?} vs {s:?}"));
        }
    }
    t.finish("counting identities")
}

fn branches(a: &VerifyArgs) -> Result<Check, Failure> {
    let mut t = Tally::new();
    for (nt, np) in pairs(a) {
        let cfg = AntisymConfig::new(nt, np, min_qubits(nt));
        let mut shared = generate_shared_schedule(&cfg).map_err(Failure::usage)?;
        if a.corrupt {
            shared = corrupt_schedule(&shared);
        }
        let reference = generate_reference_schedule(&cfg).map_err(Failure::usage)?;
        for s in [&reference, &shared] {
            check_branches(&mut t, s);
        }
    }
    Ok(t.finish("branch validity"))
}

fn check_branches(t: &mut Tally, s: &SwapSchedule) {
    let (nt, np) = (s.config.n_target, s.config.n_projectile);
    for r in validate_schedule(s) {
        t.record(r.passed(), || {
            format!(
                "({nt},{np}) {:?} pattern {}: occupancy {} parity {}, projectile states end in slots {:?}",
                s.variant,
                r.pattern,
                ok(r.occupancy_ok),
                ok(r.parity_ok),
                r.final_projectile_slots
            )
        });
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "wrong"
    }
}

fn subsets(universe: usize, k: usize) -> Vec<Vec<usize>> {
    (0usize..1 << universe)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..universe).filter(|i| s >> i & 1 == 1).collect())
        .collect()
}

fn double_oracle(a: &VerifyArgs) -> Result<Check, Failure> {
    let mut t = Tally::new();
    for (nt, np) in pairs(a).into_iter().filter(|(nt, np)| nt + np <= 5) {
        for n in min_qubits(nt)..=a.max_n.max(min_qubits(nt)) {
            let cfg = AntisymConfig::new(nt, np, n);
            let half = 1usize << (n - 1);
            for ot in subsets(half, nt) {
                for op in subsets(half, np) {
                    let target = SubsystemState::determinant(0, ot.clone()).map_err(Failure::usage)?;
                    let proj = SubsystemState::determinant(1, op.clone()).map_err(Failure::usage)?;
                    let x = oracle_antisymmetrize(&target, &proj, &cfg).map_err(Failure::usage)?;
                    let y = oracle_full_permutation_check(&target, &proj, &cfg).map_err(Failure::usage)?;
                    let f = fidelity(&x, &y).map_err(Failure::usage)?;
                    t.record(f >= 1.0 - 1e-12, || format!("({nt},{np}) n={n} {ot:?}|{op:?}: fidelity {f}"));
                }
            }
        }
    }
    Ok(t.finish("double-oracle agreement"))
}

fn end_to_end_configs(a: &VerifyArgs) -> Vec<AntisymConfig> {
    let mut out: Vec<AntisymConfig> = pairs(a)
        .into_iter()
        .flat_map(|(nt, np)| (min_qubits(nt)..=a.max_n).map(move |n| AntisymConfig::new(nt, np, n)))
        .filter(|c| a.heavy || c.particles() * (c.qubits_per_particle + 1) <= LIGHT_QUBITS)
        .collect();
    let heavy = AntisymConfig::new(3, 3, 3);
    if a.heavy && !out.contains(&heavy) {
        out.push(heavy);
    }
    out
}

fn end_to_end(a: &VerifyArgs) -> Result<Check, Failure> {
    let mut t = Tally::new();
    let collapsed = BuildOptions {
        collapse: true,
        ..Default::default()
    };
    let variants = [
        ("reference", Variant::Reference, BuildOptions::default()),
        ("shared", Variant::Shared, BuildOptions::default()),
        ("parallel", Variant::Parallel, BuildOptions::default()),
        ("collapsed", Variant::Shared, collapsed),
    ];
    for cfg in end_to_end_configs(a) {
        let n = cfg.qubits_per_particle;
        let det = (
            SubsystemState::determinant(0, (0..cfg.n_target).collect()).map_err(Failure::usage)?,
            SubsystemState::determinant(1, (0..cfg.n_projectile).collect()).map_err(Failure::usage)?,
        );
        let mut inputs = vec![("determinant".to_string(), det)];
        for seed in 0..a.trials {
            inputs.push((format!("seed {seed}"), seeded_inputs(&cfg, seed).map_err(Failure::usage)?));
        }
        for (label, (target, proj)) in &inputs {
            let want = oracle_antisymmetrize(target, proj, &cfg).map_err(Failure::usage)?;
            let tv = target.state_vector(n).map_err(Failure::usage)?;
            let pv = proj.state_vector(n).map_err(Failure::usage)?;
            for (name, variant, opts) in &variants {
                let tag = || format!("({},{}) n={n} {name} {label}", cfg.n_target, cfg.n_projectile);
                let width = build_full_circuit(&cfg, *variant, opts).map_err(Failure::usage)?.circuit.num_qubits();
                if width > max_qubits() {
                    t.skipped += 1;
                    continue;
                }
                let out = match run_antisymmetrization(&tv, &pv, &cfg, *variant, opts) {
                    Ok(out) => out,
                    Err(e) => {
                        t.record(false, || format!("{}: {e}", tag()));
                        continue;
                    }
                };
                let got = out.particle_state().map_err(Failure::usage)?;
                let f = fidelity(&got, &want).map_err(Failure::usage)?;
                let res = antisymmetry_residual(&got, &slot_blocks(cfg.particles(), n)).map_err(Failure::usage)?;
                let d = &out.diagnostics;
                let good = f >= 1.0 - TOL && res <= TOL && d.ancilla_ground_weight >= 1.0 - TOL && (d.norm - 1.0).abs() <= TOL;
                t.record(good, || {
                    format!(
                        "{}: fidelity {f}, residual {res}, ancilla ground weight {}, norm {}",
                        tag(),
                        d.ancilla_ground_weight,
                        d.norm
                    )
                });
            }
        }
    }
    Ok(t.finish("end-to-end fidelity"))
}

pub(crate) fn run(a: &VerifyArgs) -> Result<(), Failure> {
    if a.max_nt == 0 || a.max_np == 0 || a.max_n < 2 {
        return Err(Failure::usage("bounds need max-nt >= 1, max-np >= 1, max-n >= 2"));
    }
    let checks = vec![counting(), branches(a)?, double_oracle(a)?, end_to_end(a)?];
    for c in &checks {
        let skipped = if c.skipped > 0 { format!(", {} skipped over capacity", c.skipped) } else { String::new() };
        println!("{} {} ({} cases{skipped})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.cases);
    }
    let report = VerifyReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    };
    if let Some(path) = &a.report {
        write_file(path, &to_json(&report))?;
    }
    match report.checks.iter().find_map(|c| c.first_failure.as_ref().map(|f| (c.name, f))) {
        Some((name, first)) => Err(Failure::check(format!("{name} failed: {first}"))),
        None => Ok(()),
    }
}
