//! Definition-file parsing, command dispatch and report rendering for the
//! `algkit` binary.

pub mod commands;
pub mod definition;
pub mod report;

use std::io::IsTerminal;
use std::path::Path;

use commands::{Command, CommandError, Options};
use definition::DefinitionError;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const SEMANTIC: i32 = 3;
}

#[derive(Clone, Debug, Default)]
pub struct Invocation {
    pub options: Options,
    pub json: bool,
    pub output: Option<std::path::PathBuf>,
}

/// Rendered output plus exit code, or a diagnostic plus exit code.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn color_enabled(to_terminal: bool) -> bool {
    std::env::var("ALGKIT_COLOR").map_or(to_terminal, |v| v != "0")
}

pub fn execute(cmd: Command, input: &[u8], inv: &Invocation) -> Outcome {
    let fail = |code, msg: String| Outcome { stdout: String::new(), stderr: format!("algkit: {msg}\n"), code };
    let Ok(src) = std::str::from_utf8(input) else {
        return fail(exit::PARSE, "input is not valid UTF-8".into());
    };
    let def = match definition::parse_definition(src) {
        Ok(d) => d,
        Err(e @ DefinitionError::Parse { .. }) => return fail(exit::PARSE, e.to_string()),
        Err(e @ DefinitionError::Semantic { .. }) => return fail(exit::SEMANTIC, e.to_string()),
    };
    let report = match commands::run(cmd, &def, input, &inv.options) {
        Ok(r) => r,
        Err(e @ CommandError::Usage(_)) | Err(e @ CommandError::Core(_)) => return fail(exit::SEMANTIC, e.to_string()),
    };
    let code = if report.passed() { exit::PASS } else { exit::CHECK_FAILED };
    let body = if inv.json {
        report.to_json()
    } else {
        let terminal = inv.output.is_none() && std::io::stdout().is_terminal();
        report.to_text(color_enabled(terminal))
    };
    Outcome { stdout: body, stderr: String::new(), code }
}

pub fn run_file(cmd: Command, path: &Path, inv: &Invocation) -> Outcome {
    match std::fs::read(path) {
        Ok(bytes) => execute(cmd, &bytes, inv),
        Err(e) => Outcome { stdout: String::new(), stderr: format!("algkit: cannot read {}: {e}\n", path.display()), code: exit::PARSE },
    }
}
