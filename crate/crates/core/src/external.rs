//! Run an external program as the blackbox. The decision vector goes in
//! through a temp file, objective and constraint values come back on the
//! program's standard output.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::problem::{Blackbox, BlackboxOutput, ProblemSpec};

/// A command-line blackbox. Each evaluation writes x as one line of
/// space-separated 17-significant-digit decimals to a fresh temp file and
/// runs `program [args...] <tempfile>`; stdout must carry m + j decimals
/// (objectives first, then constraints). Nonzero exit, timeout, malformed
/// output, or NaN tokens count as a hidden failure for that point; failure
/// to spawn the program at all aborts the run.
pub struct ExternalBlackbox {
    program: PathBuf,
    args: Vec<String>,
    timeout: Duration,
    spec: ProblemSpec<f64>,
}

impl ExternalBlackbox {
    /// `command` is split on whitespace: first token the program, the rest
    /// fixed arguments placed before the temp-file path.
    pub fn new(command: &str, timeout: Duration, spec: ProblemSpec<f64>) -> Result<Self> {
        let mut tokens = command.split_whitespace();
        let program = tokens
            .next()
            .ok_or_else(|| Error::Config("external command must not be empty".into()))?;
        if timeout.is_zero() {
            return Err(Error::Config("external timeout must be positive".into()));
        }
        Ok(Self {
            program: PathBuf::from(program),
            args: tokens.map(String::from).collect(),
            timeout,
            spec,
        })
    }

    /// Formats x exactly as handed to the external program.
    pub fn format_point(x: &[f64]) -> String {
        let fields: Vec<String> = x.iter().map(|v| format!("{v:.16e}")).collect();
        fields.join(" ")
    }

    fn run_once(&self, x: &[f64]) -> Result<BlackboxOutput<f64>> {
        let mut input = tempfile::NamedTempFile::new()
            .map_err(|e| Error::BlackboxIo(format!("cannot create temp file: {e}")))?;
        writeln!(input, "{}", Self::format_point(x))
            .map_err(|e| Error::BlackboxIo(format!("cannot write temp file: {e}")))?;
        input
            .flush()
            .map_err(|e| Error::BlackboxIo(format!("cannot flush temp file: {e}")))?;

        let mut child = Command::new(&self.program)
            .args(&self.args)
            .arg(input.path())
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| {
                Error::BlackboxIo(format!("cannot spawn {}: {e}", self.program.display()))
            })?;

        // Poll with a deadline instead of a blocking wait so a hung
        // simulator costs one timeout, not the whole run.
        let deadline = Instant::now() + self.timeout;
        let status = loop {
            match child.try_wait() {
                Ok(Some(status)) => break status,
                Ok(None) => {
                    if Instant::now() >= deadline {
                        let _ = child.kill();
                        let _ = child.wait();
                        return Ok(BlackboxOutput::HiddenFailure);
                    }
                    std::thread::sleep(Duration::from_millis(2));
                }
                Err(e) => return Err(Error::BlackboxIo(format!("wait failed: {e}"))),
            }
        };
        if !status.success() {
            return Ok(BlackboxOutput::HiddenFailure);
        }

        let mut stdout = String::new();
        if let Some(mut pipe) = child.stdout.take() {
            use std::io::Read;
            if pipe.read_to_string(&mut stdout).is_err() {
                return Ok(BlackboxOutput::HiddenFailure);
            }
        }
        let values: Vec<f64> = match stdout
            .split_whitespace()
            .map(str::parse::<f64>)
            .collect::<std::result::Result<_, _>>()
        {
            Ok(v) => v,
            Err(_) => return Ok(BlackboxOutput::HiddenFailure),
        };
        if values.len() != self.spec.m + self.spec.j || values.iter().any(|v| v.is_nan()) {
            return Ok(BlackboxOutput::HiddenFailure);
        }
        let c = values[self.spec.m..].to_vec();
        let f = values[..self.spec.m].to_vec();
        Ok(BlackboxOutput::Values { f, c })
    }
}

impl Blackbox<f64> for ExternalBlackbox {
    fn spec(&self) -> &ProblemSpec<f64> {
        &self.spec
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<BlackboxOutput<f64>> {
        self.run_once(x)
    }
}
