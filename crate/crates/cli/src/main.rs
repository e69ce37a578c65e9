use std::io;
use std::process::ExitCode;

use toroid_cli::CliError;

fn main() -> ExitCode {
    let stdout = io::stdout();
    match toroid_cli::run(std::env::args_os(), &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Arguments(rendered)) => {
            eprint!("{rendered}");
            ExitCode::from(toroid_cli::error::EXIT_USAGE)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
