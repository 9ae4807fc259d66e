mod args;
mod commands;
mod error;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::Cli;
use error::CliError;

fn run(cli: &Cli) -> Result<u8, CliError> {
    let format = cli.common.format.unwrap_or_else(|| cli.command.default_format());
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.common.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {:?} worker threads: {e}", cli.common.threads)))?;
    let start = Instant::now();
    let outcome = pool.install(|| commands::dispatch(&cli.command, &cli.common))?;
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let report = commands::render(&outcome, cli.command.name(), format, elapsed_ms)?;
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = stdout.write_all(report.as_bytes());
    let _ = stdout.flush();
    Ok(outcome.status.code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
