//! Running an external SMT solver as a subprocess.

use std::io::{Read, Write};
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use btor2kit_core::bmc::{parse_solver_output, Solver, SolverError, SolverRun};
use wait_timeout::ChildExt;

/// Environment variable holding the default solver command.
pub const SOLVER_ENV: &str = "BTOR2KIT_SOLVER";

/// A solver command line. `{file}` in an argument is replaced by the path of
/// a temporary file holding the script; without it the script goes to
/// standard input.
#[derive(Clone, Debug)]
pub struct CommandSolver {
    pub command: String,
    pub timeout: Option<Duration>,
}

impl CommandSolver {
    pub fn new(command: impl Into<String>, timeout: Option<Duration>) -> Self {
        CommandSolver { command: command.into(), timeout }
    }
}

impl Solver for CommandSolver {
    fn solve(&self, script: &str) -> Result<SolverRun, SolverError> {
        run_solver(script, &self.command, self.timeout)
    }
}

/// The solver named by `BTOR2KIT_SOLVER`, if set.
pub fn solver_from_env() -> Option<String> {
    std::env::var(SOLVER_ENV).ok().filter(|s| !s.trim().is_empty())
}

/// A z3 command line, if a `z3` executable is on the `PATH`.
pub fn z3_on_path() -> Option<String> {
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path)
        .map(|dir| dir.join("z3"))
        .find(|p| p.is_file())
        .map(|p| format!("{} -smt2 -in", p.display()))
}

fn io_error(what: &str, e: std::io::Error) -> SolverError {
    SolverError::Failed(format!("{what}: {e}"))
}

/// Runs one script through `command` and parses its answer.
///
/// The exit status is ignored as long as the output starts with a status
/// token. Exceeding `timeout` kills the process and yields
/// [`SolverError::Timeout`].
pub fn run_solver(script: &str, command: &str, timeout: Option<Duration>) -> Result<SolverRun, SolverError> {
    let words = shlex::split(command)
        .filter(|w| !w.is_empty())
        .ok_or_else(|| SolverError::NotFound(format!("cannot parse solver command `{command}`")))?;
    let file = if words.iter().any(|w| w.contains("{file}")) {
        let mut f = tempfile::Builder::new()
            .prefix("btor2kit-")
            .suffix(".smt2")
            .tempfile()
            .map_err(|e| io_error("temporary file", e))?;
        f.write_all(script.as_bytes()).map_err(|e| io_error("temporary file", e))?;
        f.flush().map_err(|e| io_error("temporary file", e))?;
        Some(f)
    } else {
        None
    };
    let path = file.as_ref().map(|f| f.path().display().to_string());
    let args: Vec<String> = words
        .iter()
        .map(|w| match &path {
            Some(p) => w.replace("{file}", p),
            None => w.clone(),
        })
        .collect();

    let start = Instant::now();
    let mut child = Command::new(&args[0])
        .args(&args[1..])
        .stdin(if file.is_some() { Stdio::null() } else { Stdio::piped() })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => SolverError::NotFound(args[0].clone()),
            _ => io_error(&args[0], e),
        })?;
    let stdin = child.stdin.take().map(|mut stdin| {
        let script = script.to_owned();
        // A solver that exits early closes the pipe; the write error is moot.
        thread::spawn(move || {
            let _ = stdin.write_all(script.as_bytes());
        })
    });
    let mut stdout = child.stdout.take().expect("piped stdout");
    let mut stderr = child.stderr.take().expect("piped stderr");
    let out = thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let err = thread::spawn(move || {
        let mut s = String::new();
        let _ = stderr.read_to_string(&mut s);
        s
    });

    let status = match timeout {
        Some(t) => child.wait_timeout(t).map_err(|e| io_error("wait", e))?,
        None => Some(child.wait().map_err(|e| io_error("wait", e))?),
    };
    let Some(status) = status else {
        let _ = child.kill();
        let _ = child.wait();
        return Err(SolverError::Timeout);
    };
    let elapsed = start.elapsed();
    if let Some(h) = stdin {
        let _ = h.join();
    }
    let stdout = out.join().unwrap_or_default();
    let stderr = err.join().unwrap_or_default();
    match parse_solver_output(&stdout) {
        Ok(response) => Ok(SolverRun { response, elapsed }),
        Err(_) if !status.success() => {
            let detail = stderr.lines().chain(stdout.lines()).find(|l| !l.trim().is_empty()).unwrap_or("no output");
            Err(SolverError::Failed(format!("{} exited with {status}: {detail}", display_name(&args[0]))))
        }
        Err(e) => Err(e.into()),
    }
}

fn display_name(program: &str) -> String {
    Path::new(program).file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| program.to_owned())
}
