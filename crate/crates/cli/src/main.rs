//! `antisymq`: generate, simulate, verify and cost antisymmetrization
//! circuits.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 for usage
//! or configuration errors.

mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use antisym_core::antisym::{
    build_full_circuit, n_perm_binomial, run_antisymmetrization, AntisymCircuit, BuildOptions, Compilation,
    SharedOptions, Variant,
};
use antisym_core::circuit::{emit_qasm, metrics, ResourceReport};
use antisym_core::layout::AntisymConfig;
use antisym_core::oracle::{antisymmetry_residual, oracle_antisymmetrize, seeded_inputs, slot_blocks, SubsystemState};
use antisym_core::qstate::fidelity;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "antisymq", version, about = "Deterministic antisymmetrization circuits for two fermionic subsystems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a circuit and print its resource report.
    Generate(GenerateArgs),
    /// Simulate a circuit on given or seeded inputs and compare with the oracle.
    Simulate(SimulateArgs),
    /// Run the property suite over a range of configurations.
    Verify(verify::VerifyArgs),
    /// Print schedule costs without simulating.
    Estimate(EstimateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Reference,
    Shared,
    Parallel,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Reference => Variant::Reference,
            VariantArg::Shared => Variant::Shared,
            VariantArg::Parallel => Variant::Parallel,
        }
    }
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Target particle count N_T.
    #[arg(long)]
    nt: usize,
    /// Projectile particle count N_p.
    #[arg(long)]
    np: usize,
    /// Qubits per particle, including the side qubit.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "shared")]
    variant: VariantArg,
    /// Apply the swap-collapse pass.
    #[arg(long)]
    collapse: bool,
    /// Prepare the Dicke register with gates.
    #[arg(long)]
    gate_dicke: bool,
    /// Work qubits for the parallel variant (default N_p).
    #[arg(long)]
    parallel_ancillae: Option<usize>,
}

impl ConfigArgs {
    fn config(&self) -> Result<AntisymConfig, Failure> {
        let cfg = AntisymConfig::new(self.nt, self.np, self.n);
        cfg.validate().map_err(Failure::usage)?;
        Ok(cfg)
    }

    fn options(&self) -> BuildOptions {
        BuildOptions {
            use_gate_dicke: self.gate_dicke,
            parallel_ancillae: self.parallel_ancillae,
            collapse: self.collapse,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Write OpenQASM 3 to this path.
    #[arg(long)]
    qasm: Option<PathBuf>,
    /// Write the circuit, layout and schedule as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Print the qubit layout and stage structure.
    #[arg(long)]
    describe: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Target state as a JSON file or inline JSON. Seeded random if omitted.
    #[arg(long)]
    target: Option<String>,
    /// Projectile state as a JSON file or inline JSON. Seeded random if omitted.
    #[arg(long)]
    projectile: Option<String>,
    /// Seed for the random inputs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also run this variant and report the fidelity between the two outputs.
    #[arg(long, value_enum)]
    compare: Option<VariantArg>,
    /// Write the report JSON to this path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Include wall time in the report (makes it non-reproducible).
    #[arg(long)]
    wall_time: bool,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long, default_value_t = 12)]
    max_nt: usize,
    #[arg(long, default_value_t = 3)]
    max_np: usize,
    /// Qubits per particle; rows needing more use their minimum.
    #[arg(long)]
    n: Option<usize>,
    /// Print rows as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

/// Error carrying its exit code.
#[derive(Debug)]
pub(crate) struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub(crate) fn usage(e: impl std::fmt::Display) -> Self {
        Failure { code: 2, message: e.to_string() }
    }

    pub(crate) fn check(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(&a),
        Command::Simulate(a) => simulate(&a),
        Command::Verify(a) => verify::run(&a),
        Command::Estimate(a) => estimate(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize") + "\n"
}

fn print_report(r: &ResourceReport) {
    println!("resource report");
    for (kind, count) in &r.gate_count_by_kind {
        println!("  {kind:<16}{count}");
    }
    for (controls, count) in &r.multicontrol_histogram {
        println!("  mcx/{controls:<12}{count}");
    }
    println!("  {:<16}{}", "swaps", r.swap_count);
    println!("  {:<16}{}", "cnots", r.cnot_gates);
    println!("  {:<16}{}", "ancillae", r.ancilla_count);
    println!("  {:<16}{}", "depth", r.depth);
    println!("  {:<16}{}", "cnot-equivalent", r.cnot_equivalent);
}

fn describe(built: &AntisymCircuit) {
    let l = &built.layout;
    println!("layout ({} qubits)", l.total_qubits);
    for s in &l.slots {
        let kind = if l.is_target_slot(s.index) { "target" } else { "projectile" };
        let qubits: Vec<String> = s.block().iter().map(|q| q.to_string()).collect();
        println!("  slot {:<3}{kind:<11}qubits {}", s.index, qubits.join(","));
    }
    let dicke: Vec<String> = l.dicke_ancillae.iter().map(|q| q.to_string()).collect();
    println!("  dicke ancillae   {}", dicke.join(","));
    let work: Vec<String> = (l.slot_qubits() + l.dicke_ancillae.len()..built.circuit.num_qubits())
        .map(|q| q.to_string())
        .collect();
    println!("  work ancillae    {}", if work.is_empty() { "-".into() } else { work.join(",") });
    let st = &built.stages;
    println!("stages (gate index ranges)");
    println!("  dicke      {:?}", st.dicke);
    println!("  swap       {:?}", st.swap);
    println!("  phase      {:?}", st.phase);
    println!("  uncompute  {:?}", st.uncompute);
}

fn generate(a: &GenerateArgs) -> Result<(), Failure> {
    let cfg = a.config.config()?;
    let built = build_full_circuit(&cfg, a.config.variant.into(), &a.config.options()).map_err(Failure::usage)?;
    if let Some(path) = &a.qasm {
        write_file(path, &emit_qasm(&built.circuit))?;
    }
    if let Some(path) = &a.json {
        let doc = serde_json::json!({
            "config": cfg,
            "variant": built.schedule.variant,
            "layout": built.layout,
            "schedule": built.schedule,
            "stages": built.stages,
            "circuit": built.circuit,
        });
        write_file(path, &to_json(&doc))?;
    }
    if a.describe {
        describe(&built);
    }
    println!(
        "({},{}) n={} variant={:?} schedule ops={} uncompute cnots={}",
        cfg.n_target,
        cfg.n_projectile,
        cfg.qubits_per_particle,
        built.schedule.variant,
        built.schedule.ops.len(),
        metrics(&built.stage(&built.stages.uncompute)).cnot_gates,
    );
    print_report(&metrics(&built.circuit));
    Ok(())
}

fn load_state(arg: &str, what: &str) -> Result<SubsystemState, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::usage(format!("cannot read {what} {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{what}: {e}")))
}

#[derive(Serialize)]
struct RunReport {
    config: AntisymConfig,
    variant: Variant,
    options: BuildOptions,
    seed: Option<u64>,
    fidelity: f64,
    antisymmetry_residual: f64,
    ancilla_ground_weight: f64,
    norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<Comparison>,
    resources: ResourceReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_s: Option<f64>,
}

#[derive(Serialize)]
struct Comparison {
    variant: Variant,
    fidelity: f64,
}

fn simulate(a: &SimulateArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let cfg = a.config.config()?;
    let n = cfg.qubits_per_particle;
    let (seeded_t, seeded_p) = seeded_inputs(&cfg, a.seed).map_err(Failure::usage)?;
    let target = match &a.target {
        Some(s) => load_state(s, "target")?,
        None => seeded_t,
    };
    let projectile = match &a.projectile {
        Some(s) => load_state(s, "projectile")?,
        None => seeded_p,
    };
    let seed = (a.target.is_none() || a.projectile.is_none()).then_some(a.seed);
    let tv = target.state_vector(n).map_err(Failure::usage)?;
    let pv = projectile.state_vector(n).map_err(Failure::usage)?;

    let variant: Variant = a.config.variant.into();
    let opts = a.config.options();
    let out = run_antisymmetrization(&tv, &pv, &cfg, variant, &opts).map_err(Failure::usage)?;
    let got = out.particle_state().map_err(Failure::usage)?;
    let want = oracle_antisymmetrize(&target, &projectile, &cfg).map_err(Failure::usage)?;

    let comparison = match a.compare {
        Some(other) => {
            let other: Variant = other.into();
            let other_opts = BuildOptions {
                parallel_ancillae: None,
                ..opts
            };
            let o = run_antisymmetrization(&tv, &pv, &cfg, other, &other_opts).map_err(Failure::usage)?;
            Some(Comparison {
                variant: other,
                fidelity: fidelity(&got, &o.particle_state().map_err(Failure::usage)?).map_err(Failure::usage)?,
            })
        }
        None => None,
    };

    let report = RunReport {
        config: cfg,
        variant,
        options: opts,
        seed,
        fidelity: fidelity(&got, &want).map_err(Failure::usage)?,
        antisymmetry_residual: antisymmetry_residual(&got, &slot_blocks(cfg.particles(), n)).map_err(Failure::usage)?,
        ancilla_ground_weight: out.diagnostics.ancilla_ground_weight,
        norm: out.diagnostics.norm,
        comparison,
        resources: metrics(&out.built.circuit),
        wall_time_s: a.wall_time.then(|| start.elapsed().as_secs_f64()),
    };
    let json = to_json(&report);
    if let Some(path) = &a.report {
        write_file(path, &json)?;
    }
    print!("{json}");
    Ok(())
}

#[derive(Serialize)]
struct EstimateRow {
    n_target: usize,
    n_projectile: usize,
    n: usize,
    n_perm: u128,
    swaps: usize,
    ancillae: usize,
    cnot_equivalent: usize,
    depth_sequential: usize,
    depth_parallel: usize,
}

pub(crate) fn min_qubits(nt: usize) -> usize {
    let mut n = 2;
    while 1usize << (n - 1) < nt {
        n += 1;
    }
    n
}

fn estimate_row(nt: usize, np: usize, n: usize) -> Result<EstimateRow, Failure> {
    let cfg = AntisymConfig::new(nt, np, n);
    let flags = BuildOptions {
        shared: SharedOptions {
            compilation: Compilation::Flags,
            ..Default::default()
        },
        ..Default::default()
    };
    let shared = build_full_circuit(&cfg, Variant::Shared, &BuildOptions::default()).map_err(Failure::usage)?;
    let seq = build_full_circuit(&cfg, Variant::Shared, &flags).map_err(Failure::usage)?;
    let par = build_full_circuit(&cfg, Variant::Parallel, &BuildOptions::default()).map_err(Failure::usage)?;
    let r = metrics(&shared.circuit);
    Ok(EstimateRow {
        n_target: nt,
        n_projectile: np,
        n,
        n_perm: n_perm_binomial(nt, np).map_err(Failure::usage)?,
        swaps: r.swap_count,
        ancillae: r.ancilla_count,
        cnot_equivalent: r.cnot_equivalent,
        depth_sequential: metrics(&seq.circuit).depth,
        depth_parallel: metrics(&par.circuit).depth,
    })
}

fn estimate(a: &EstimateArgs) -> Result<(), Failure> {
    let mut rows = Vec::new();
    for nt in 1..=a.max_nt {
        for np in 1..=nt.min(a.max_np) {
            let n = a.n.unwrap_or(0).max(min_qubits(nt));
            rows.push(estimate_row(nt, np, n)?);
        }
    }
    if a.json {
        print!("{}", to_json(&rows));
        return Ok(());
    }
    println!(
        "{:>4} {:>4} {:>3} {:>8} {:>6} {:>9} {:>9} {:>9} {:>9}",
        "N_T", "N_p", "n", "N_perm", "swaps", "ancillae", "cnot-eq", "depth-seq", "depth-par"
    );
    for r in &rows {
        println!(
            "{:>4} {:>4} {:>3} {:>8} {:>6} {:>9} {:>9} {:>9} {:>9}",
            r.n_target,
            r.n_projectile,
            r.n,
            r.n_perm,
            r.swaps,
            r.ancillae,
            r.cnot_equivalent,
            r.depth_sequential,
            r.depth_parallel
        );
    }
    Ok(())
}
