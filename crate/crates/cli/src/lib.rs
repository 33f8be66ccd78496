//! Command-line front end: file formats, generators, and verification
//! reports for the quantum-graph toolkit.

pub mod commands;
pub mod error;
pub mod format;

use std::io::Write;

use clap::Parser;

/// Parses `argv` and runs the command, writing human-readable output to
/// `out`. Returns the process exit code: 0 success, 1 verification failed,
/// 2 malformed input, 3 internal cross-check failure.
pub fn run_with_output(argv: &[String], out: &mut dyn Write) -> i32 {
    let cli = match commands::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    match commands::execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(argv: &[String]) -> i32 {
    let mut stdout = std::io::stdout();
    run_with_output(argv, &mut stdout)
}
