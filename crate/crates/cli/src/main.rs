mod args;
mod commands;
mod error;
mod output;
mod settings;
mod state_file;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};
use error::{CliError, EXIT_USAGE};
use settings::Settings;

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Qfi(a) => commands::qfi(&a, &Settings::resolve(&a.common, Format::Csv)?),
        Command::Gme(a) => commands::gme(&a, &Settings::resolve(&a.common, Format::Csv)?),
        Command::Audit(a) => commands::audit(&a, &Settings::resolve(&a.common, Format::Json)?),
        Command::Scaling(a) => commands::scaling(&a, &Settings::resolve(&a.common, Format::Csv)?),
        Command::FigureEg(a) => commands::figure_eg(&a, &Settings::resolve(&a.common, Format::Csv)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
