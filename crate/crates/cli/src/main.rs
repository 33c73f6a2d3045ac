use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = ebcv_cli::Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match ebcv_cli::run(&cli, &mut stdout) {
        Ok(code) => ExitCode::from(code),
        // `ebcv killing list | head` and the like
        Err(ebcv_cli::CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
