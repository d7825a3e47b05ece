use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mixdecomp::cli::{exit_code, run, Cli, Output};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let code = exit_code(&out);
            let text = match &out {
                Output::Report(r) => r.to_json(),
                Output::Instance(i) => i.to_json(),
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": e.to_string() }));
            ExitCode::from(2)
        }
    }
}
