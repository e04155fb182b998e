use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use algkit_cli::commands::{Command, Options};
use algkit_cli::{run_file, Invocation};
use clap::{Args, Parser, Subcommand};

/// Verify Lie algebroid definition files.
#[derive(Parser)]
#[command(name = "algkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Definition file (JSON).
    file: PathBuf,
    /// Emit the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the algebroid axioms.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Print the complete lift of a multivector.
    Lift {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tensor: String,
    },
    /// Print the structure deformed by an endomorphism.
    Deform {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        endo: String,
    },
    /// Print the Nijenhuis torsion of an endomorphism.
    Torsion {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        endo: String,
    },
    /// Check the Poisson-Nijenhuis conditions for a bivector and an endomorphism.
    PnCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tensor: String,
        #[arg(long)]
        endo: String,
    },
    /// Check the Lie bialgebroid induced by a bivector.
    BialgebroidCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tensor: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, common, tensor, endo) = match cli.command {
        Cmd::Validate { common } => (Command::Validate, common, None, None),
        Cmd::Lift { common, tensor } => (Command::Lift, common, Some(tensor), None),
        Cmd::Deform { common, endo } => (Command::Deform, common, None, Some(endo)),
        Cmd::Torsion { common, endo } => (Command::Torsion, common, None, Some(endo)),
        Cmd::PnCheck { common, tensor, endo } => (Command::PnCheck, common, Some(tensor), Some(endo)),
        Cmd::BialgebroidCheck { common, tensor } => (Command::BialgebroidCheck, common, Some(tensor), None),
    };
    let inv = Invocation { options: Options { tensor, endo }, json: common.json, output: common.output.clone() };
    let outcome = run_file(cmd, &common.file, &inv);
    eprint!("{}", outcome.stderr);
    if !outcome.stdout.is_empty() {
        match &common.output {
            Some(path) => {
                if let Err(e) = std::fs::write(path, &outcome.stdout) {
                    eprintln!("algkit: cannot write {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            }
            None => {
                let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
            }
        }
    }
    ExitCode::from(outcome.code as u8)
}
