use std::process::ExitCode;

use clap::Parser;
use dgforge::cache::Cache;
use dgforge::doc::to_canonical;
use dgforge::{execute, Cli, Format};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let cache = if cli.no_cache { None } else { Cache::from_env() };
    match execute(&cli.command, cache.as_ref()) {
        Ok(report) => {
            match cli.format {
                Format::Json => print!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            match cli.format {
                Format::Json => eprint!("{}", to_canonical(&e.to_json())),
                Format::Text => eprintln!("error ({}): {e}", e.kind()),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
