use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use rotalg_cli::args::Cli;
use rotalg_cli::{execute, ExitStatus, DEFAULT_ANGLE_VAR};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(ExitStatus::InputError.code()),
            };
        }
    };
    let default_angle = std::env::var(DEFAULT_ANGLE_VAR).ok().filter(|s| !s.trim().is_empty());
    let (job, output) = cli.into_job(default_angle);
    match execute(&job, output.as_deref()) {
        Ok((status, text)) => {
            if let Some(text) = text {
                let mut out = std::io::stdout().lock();
                let _ = out.write_all(text.as_bytes());
            }
            ExitCode::from(status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ExitStatus::InputError.code())
        }
    }
}
