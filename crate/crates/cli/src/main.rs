use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use dpmech::{run, tolerance_from_env, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match tolerance_from_env().and_then(|tol| run(cli, tol)) {
        Ok(value) => {
            let text = serde_json::to_string_pretty(&value).expect("json values always serialise");
            // a closed pipe downstream is not our failure
            let _ = writeln!(io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
