use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use sas_cli::{run, Cli};
use serde_json::json;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let envelope = json!({
                "error": { "kind": "usage", "message": e.to_string().trim_end(), "exit_code": 2 }
            });
            eprintln!("{envelope}");
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.envelope());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
