//! Thin command-line front end over the convergence harness.
//!
//! Exit codes: 0 success, 2 configuration error, 3 solver blow-up in all
//! rows, 4 I/O error.

use std::process::ExitCode;

use clap::Parser;

use gs_spectral::error::Error;
use gs_spectral::harness::{parse_config, run_convergence_study, Cli, Command, RunArgs};

fn main() -> ExitCode {
    let cli = Cli::parse(); // clap exits with code 2 on usage errors
    match cli.command {
        Command::Run(args) => match run(args) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                match e {
                    Error::Config(_) => ExitCode::from(2),
                    Error::Io(_) => ExitCode::from(4),
                    _ => ExitCode::from(1),
                }
            }
        },
    }
}

fn run(args: RunArgs) -> Result<ExitCode, Error> {
    let config = parse_config(args)?;
    let table = run_convergence_study(&config)?;

    for row in &table.rows {
        if let gs_spectral::harness::TableRow::Failed { h, sigma, reason } = row {
            eprintln!("row h={h} sigma={sigma} failed: {reason}");
        }
    }

    std::fs::create_dir_all(&config.out_dir)?;
    let path = config.out_dir.join(format!(
        "convergence_ex{}_q{}.csv",
        config.example, config.q
    ));
    let file = std::fs::File::create(&path)?;
    table.write_csv(std::io::BufWriter::new(file))?;
    print!("{}", table.to_csv_string());
    eprintln!("table written to {}", path.display());

    if table.all_rows_failed() {
        eprintln!("error: solver blew up in every row");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}
