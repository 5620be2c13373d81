//! Subcommands of the `btor2kit` binary. Human-readable messages go to
//! stderr; BTOR2, SMT-LIB, witnesses and traces go to stdout or files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use btor2kit_core::bmc::{self, emit_smtlib, unroll_all, BmcResult, Engine, Mode, Verdict};
use btor2kit_core::btor2::{parse_btor2, typecheck, Btor2File};
use btor2kit_core::interp::{simulate, PropertyStatus, SimOptions};
use btor2kit_core::ir::Program;
use btor2kit_core::translate::{canonical_form, to_btor2, to_ir};
use clap::{Args, Parser, Subcommand};

use crate::solver::{solver_from_env, CommandSolver};
use crate::witness::{write_trace, write_witness};
use crate::{check_parallel, load, LoadError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_ERROR: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;
pub const EXIT_UNKNOWN: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "btor2kit", version, about = "Validate, round-trip, simulate and model-check BTOR2 circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and sort-check a file.
    Validate { path: PathBuf },
    /// Translate to the program IR and back, printing the result.
    Roundtrip {
        path: PathBuf,
        /// Compare canonical forms of the input and the output.
        #[arg(long)]
        check: bool,
    },
    /// Simulate with random inputs.
    Sim(SimArgs),
    /// Bounded model checking.
    Bmc(BmcArgs),
    /// Node and property counts.
    Stats { path: PathBuf },
}

#[derive(Debug, Args)]
pub struct SimArgs {
    pub path: PathBuf,
    /// Clock cycles after initialisation.
    #[arg(long, default_value_t = 20)]
    pub cycles: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the trace to this file (`-` for stdout).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub stop_on_violation: bool,
}

#[derive(Debug, Args)]
pub struct BmcArgs {
    pub path: PathBuf,
    /// Check frames 0 through N.
    #[arg(long, default_value_t = 20)]
    pub bound: u32,
    /// Solver command; `{file}` stands for the script file, otherwise the
    /// script is piped to stdin. Defaults to $BTOR2KIT_SOLVER.
    #[arg(long, conflicts_with = "internal")]
    pub solver: Option<String>,
    /// Use the exhaustive internal engine.
    #[arg(long)]
    pub internal: bool,
    /// Nondet bit budget of the internal engine.
    #[arg(long, default_value_t = bmc::DEFAULT_BUDGET_BITS)]
    pub budget: u32,
    /// Write the SMT-LIB script(s) to this file (`-` for stdout).
    #[arg(long)]
    pub emit_smt: Option<PathBuf>,
    /// Write witnesses of unsafe properties to this file (`-` for stdout).
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// One query per property (default).
    #[arg(long, conflicts_with = "combined")]
    pub per_property: bool,
    /// One query for all properties.
    #[arg(long)]
    pub combined: bool,
    /// Solver timeout in seconds.
    #[arg(long, default_value_t = 300)]
    pub timeout: u64,
    /// Solver queries to run in parallel.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli.command))
}

pub fn run(command: Command) -> u8 {
    let result = match command {
        Command::Validate { path } => validate(&path),
        Command::Roundtrip { path, check } => roundtrip(&path, check),
        Command::Sim(args) => sim(&args),
        Command::Bmc(args) => bmc_command(&args),
        Command::Stats { path } => stats(&path),
    };
    result.unwrap_or_else(|message| {
        eprintln!("error: {message}");
        EXIT_ERROR
    })
}

type CmdResult = Result<u8, String>;

fn write_output(path: &Path, text: &str) -> Result<(), String> {
    if path.as_os_str() == "-" {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn load_program(path: &Path) -> Result<Program, String> {
    let loaded = load(path).map_err(|e| e.to_string())?;
    Ok(to_ir(&loaded.system))
}

fn validate(path: &Path) -> CmdResult {
    let loaded = load(path).map_err(|e: LoadError| e.to_string())?;
    let sys = &loaded.system;
    eprintln!(
        "{}: ok, {} nodes, {} states, {} inputs, {} bad properties",
        path.display(),
        loaded.file.len(),
        sys.states.len(),
        sys.inputs.len(),
        sys.bads.len()
    );
    Ok(EXIT_OK)
}

/// The round-tripped file, and whether its canonical form matches the
/// input's.
pub fn roundtrip_file(original: &Btor2File) -> Result<(Btor2File, bool), String> {
    let sys = typecheck(original).map_err(|e| e.to_string())?;
    let printed = to_btor2(&to_ir(&sys)).map_err(|e| e.to_string())?;
    let same = canonical_matches(&sys, &printed.to_string())?;
    Ok((printed, same))
}

/// Whether `text` parses to a system with the same canonical form as `sys`.
pub fn canonical_matches(sys: &btor2kit_core::btor2::TypedSystem, text: &str) -> Result<bool, String> {
    let reparsed = parse_btor2(text, "<round trip>").map_err(|e| e.to_string())?;
    let resys = typecheck(&reparsed).map_err(|e| e.to_string())?;
    Ok(canonical_form(sys) == canonical_form(&resys))
}

fn roundtrip(path: &Path, check: bool) -> CmdResult {
    let loaded = load(path).map_err(|e| e.to_string())?;
    let (printed, same) = roundtrip_file(&loaded.file)?;
    print!("{printed}");
    if !check {
        return Ok(EXIT_OK);
    }
    if same {
        eprintln!("{}: round trip preserves structure", path.display());
        Ok(EXIT_OK)
    } else {
        eprintln!("{}: round trip changed the structure", path.display());
        Ok(EXIT_MISMATCH)
    }
}

fn sim(args: &SimArgs) -> CmdResult {
    let p = load_program(&args.path)?;
    let opts = SimOptions { cycles: args.cycles, seed: args.seed, stop_on_violation: args.stop_on_violation };
    let trace = simulate(&p, &opts, None).map_err(|e| e.to_string())?;
    if let Some(out) = &args.trace {
        write_output(out, &write_trace(&p, &trace))?;
    }
    let mut violated = false;
    for (j, prop) in p.properties.iter().enumerate() {
        if let Some(f) = trace.violations_of(j).next() {
            violated = true;
            eprintln!("property {j}{}: violated at frame {f}", source(prop.source));
        }
    }
    if let Some(f) = trace.frames.iter().position(|fr| fr.properties.contains(&PropertyStatus::Vacuous)) {
        eprintln!("constraints fail from frame {f} on");
    }
    if !violated {
        eprintln!("no violation in {} frames", trace.frames.len());
    }
    Ok(if violated { EXIT_VIOLATION } else { EXIT_OK })
}

fn source(id: Option<btor2kit_core::btor2::NodeId>) -> String {
    id.map(|id| format!(" (bad {id})")).unwrap_or_default()
}

fn mode(args: &BmcArgs) -> Mode {
    if args.combined {
        Mode::Combined
    } else {
        Mode::PerProperty
    }
}

fn bmc_command(args: &BmcArgs) -> CmdResult {
    let p = load_program(&args.path)?;
    let mode = mode(args);
    if let Some(out) = &args.emit_smt {
        let scripts: Vec<String> = unroll_all(&p, args.bound, mode).iter().map(emit_smtlib).collect();
        write_output(out, &scripts.join("(reset)\n"))?;
    }
    let solver_command = args.solver.clone().or_else(|| if args.emit_smt.is_some() { None } else { solver_from_env() });
    let result = if args.internal {
        bmc::check(&p, args.bound, mode, Engine::Internal { budget_bits: args.budget }).map_err(|e| e.to_string())?
    } else if let Some(command) = solver_command {
        let solver = CommandSolver::new(command, Some(Duration::from_secs(args.timeout)));
        check_parallel(&p, args.bound, mode, &solver, args.jobs).map_err(|e| e.to_string())?
    } else if args.emit_smt.is_some() {
        return Ok(EXIT_OK);
    } else {
        return Err(String::from("no engine: pass --internal or --solver, or set BTOR2KIT_SOLVER"));
    };
    report(&p, &result);
    if let Some(out) = &args.witness {
        let text: String = result.verdicts.iter().filter_map(Verdict::witness).map(|w| write_witness(&p, w)).collect();
        write_output(out, &text)?;
    }
    Ok(exit_code(&result))
}

pub fn exit_code(result: &BmcResult) -> u8 {
    if result.verdicts.iter().any(Verdict::is_unsafe) {
        EXIT_VIOLATION
    } else if result.verdicts.iter().all(Verdict::is_safe) {
        EXIT_OK
    } else {
        EXIT_UNKNOWN
    }
}

fn report(p: &Program, result: &BmcResult) {
    for (j, v) in result.verdicts.iter().enumerate() {
        let src = source(p.properties[j].source);
        match v {
            Verdict::Safe => eprintln!("property {j}{src}: safe up to bound {}", result.bound),
            Verdict::Unsafe(w) => {
                eprintln!("property {j}{src}: unsafe at frame {}", w.violation_frame.unwrap_or_default());
                for warning in &w.warnings {
                    eprintln!("  warning: {warning}");
                }
            }
            Verdict::Unknown(why) => eprintln!("property {j}{src}: unknown ({why})"),
        }
    }
    for d in &result.diagnostics {
        eprintln!("note: {d}");
    }
    if result.solver_time > Duration::ZERO {
        eprintln!("solver time: {:.3}s", result.solver_time.as_secs_f64());
    }
    if result.enumerated > 0 {
        eprintln!("enumerated {} assignments", result.enumerated);
    }
}

/// The `stats` report: one `key value` line each.
pub fn stats_text(loaded: &crate::Loaded) -> String {
    let mut by_kind: BTreeMap<&str, usize> = BTreeMap::new();
    for line in loaded.file.lines() {
        *by_kind.entry(line.kind.keyword()).or_default() += 1;
    }
    let sys = &loaded.system;
    let mut out = String::new();
    let _ = writeln!(out, "nodes {}", loaded.file.len());
    for (kind, n) in &by_kind {
        let _ = writeln!(out, "kind {kind} {n}");
    }
    let _ = writeln!(out, "states {}", sys.states.len());
    let _ = writeln!(out, "inputs {}", sys.inputs.len());
    let _ = writeln!(out, "bads {}", sys.bads.len());
    let _ = writeln!(out, "constraints {}", sys.constraints.len());
    let _ = writeln!(out, "outputs {}", sys.outputs.len());
    let _ = writeln!(out, "max-width {}", sys.max_width());
    out
}

fn stats(path: &Path) -> CmdResult {
    let loaded = load(path).map_err(|e| e.to_string())?;
    print!("{}", stats_text(&loaded));
    Ok(EXIT_OK)
}
