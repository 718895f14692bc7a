mod args;
mod commands;
mod error;
mod io;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

fn fail(e: &CliError) -> ExitCode {
    let envelope = serde_json::to_string(&e.envelope()).expect("envelope serializes");
    eprintln!("{envelope}");
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Usage(e.render().to_string().trim().to_string())),
    };
    let out = commands::run(&cli.command)
        .and_then(|artifacts| io::emit(&artifacts, cli.output_dir.as_ref()));
    match out {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(error::EXIT_VALIDATION);
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
