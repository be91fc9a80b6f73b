//! Library side of the dmads binary: argument grammar, manifest assembly,
//! subcommand logic, and artifact writers. The binary in main.rs is a thin
//! dispatcher kept separate so integration tests can drive everything
//! in-process.

pub mod args;
pub mod artifacts;
pub mod commands;
pub mod manifest;

use dmulti_mads::{Error, Result};

pub use args::{BenchArgs, Cli, Command, RefFrontArgs, SolveArgs};
pub use commands::{cmd_bench, cmd_ref_front, cmd_solve, BenchSpec};
pub use manifest::{ProblemSelector, RunManifest};

/// Exit code contract: 0 success, 2 configuration error, 3 blackbox I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BlackboxIo(_) => 3,
        _ => 2,
    }
}

/// Dispatch a parsed command line; returns the stdout summary lines.
pub fn dispatch(cli: Cli) -> Result<Vec<String>> {
    match cli.command {
        Command::Solve(args) => cmd_solve(&args.into_manifest()?),
        Command::Bench(args) => cmd_bench(&args.into_spec()?),
        Command::RefFront(args) => {
            let out = match args.out {
                Some(dir) => dir,
                None => dmulti_mads::fixture_dir(),
            };
            cmd_ref_front(&args.problem, &out, args.grid)
        }
    }
}
