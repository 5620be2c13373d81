//! File IO, solver processes and the command-line interface on top of
//! `btor2kit-core`.

pub mod cli;
pub mod solver;
pub mod witness;

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use btor2kit_core::bmc::{self, BmcResult, CheckError, Mode, Solver, Target, Verdict};
use btor2kit_core::btor2::{parse_btor2, typecheck, Btor2File, ParseError, TypeError, TypedSystem};
use btor2kit_core::ir::Program;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    Type { path: String, source: TypeError },
}

/// A parsed and sort-checked BTOR2 file.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub file: Btor2File,
    pub system: TypedSystem,
}

pub fn load_str(text: &str, name: &str) -> Result<Loaded, LoadError> {
    let file = parse_btor2(text, name)?;
    let system = typecheck(&file).map_err(|source| LoadError::Type { path: name.to_owned(), source })?;
    Ok(Loaded { file, system })
}

pub fn load(path: &Path) -> Result<Loaded, LoadError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: name.clone(), source })?;
    load_str(&text, &name)
}

type Answer = Result<(Verdict, Duration), CheckError>;

/// Solver-backed check that runs up to `jobs` queries at once.
///
/// Each query is independent; verdicts are joined by property index and
/// every unsafe verdict is confirmed by replay.
pub fn check_parallel(
    p: &Program,
    bound: u32,
    mode: Mode,
    solver: &dyn Solver,
    jobs: usize,
) -> Result<BmcResult, CheckError> {
    let targets: Vec<Target> = match mode {
        Mode::PerProperty => (0..p.properties.len()).map(Target::Property).collect(),
        Mode::Combined => vec![Target::Any],
    };
    let next = AtomicUsize::new(0);
    let answers: Mutex<Vec<Option<Answer>>> = Mutex::new(vec![None; targets.len()]);
    thread::scope(|s| {
        for _ in 0..jobs.clamp(1, targets.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&target) = targets.get(i) else { break };
                let answer = bmc::solve_target(p, bound, target, solver);
                answers.lock().expect("no panics while holding the lock")[i] = Some(answer);
            });
        }
    });
    let mut result = BmcResult { bound, ..BmcResult::default() };
    let mut verdicts = Vec::with_capacity(targets.len());
    for answer in answers.into_inner().expect("no panics while holding the lock") {
        let (v, t) = answer.expect("every target answered")?;
        result.solver_time += t;
        verdicts.push(v);
    }
    if mode == Mode::Combined {
        verdicts = bmc::combined_verdicts(p.properties.len(), verdicts.pop().unwrap_or(Verdict::Safe));
    }
    result.verdicts =
        verdicts.into_iter().enumerate().map(|(j, v)| bmc::confirm(p, j, v, &mut result.diagnostics)).collect();
    Ok(result)
}
