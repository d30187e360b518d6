//! `sepvar` binary; exit status 1 when a check fails, 2 on errors.

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use sepvar_cli::{commands, Cli, Output};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.flags.output;
    match commands::run(&cli) {
        Ok(doc) => {
            let text = match output {
                Output::Json => doc.to_json() + "\n",
                Output::Text => doc.to_text(),
            };
            // a closed pipe is not an engine failure
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if doc.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            let code = err
                .chain()
                .find_map(|e| e.downcast_ref::<sepvar_core::Error>())
                .map_or("io_error", sepvar_core::Error::code);
            let message = format!("{:#}", err);
            if output == Output::Json {
                let doc = serde_json::json!({ "error": { "code": code, "message": message } });
                let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&doc).expect("json"));
            }
            eprintln!("error[{code}]: {message}");
            ExitCode::from(2)
        }
    }
}
