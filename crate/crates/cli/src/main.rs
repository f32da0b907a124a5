use std::process::ExitCode;

use clap::Parser;
use commvar_cli::{run, usage_report, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                // --help and --version
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let report = usage_report(e.to_string());
            println!("{}", serde_json::to_string(&report).expect("report serialises"));
            return ExitCode::from(report.status.exit_code() as u8);
        }
    };
    let report = run(&cli);
    println!("{}", serde_json::to_string(&report).expect("report serialises"));
    ExitCode::from(report.status.exit_code() as u8)
}
