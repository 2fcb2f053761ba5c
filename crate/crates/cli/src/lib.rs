//! Command-line driver: argument parsing, input resolution, pipelines and JSON reports.

pub mod args;
pub mod pipeline;
pub mod report;
pub mod source;

use std::io::Write;

pub use args::Cli;
pub use pipeline::{run, Output};
pub use report::{CliError, Report};

/// Runs a parsed command and writes its output; returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(Output::Raw(text)) => match &cli.output {
            Some(path) => match std::fs::write(path, text + "\n") {
                Ok(()) => 0,
                Err(e) => io_error(&e.to_string()),
            },
            None => {
                println!("{text}");
                0
            }
        },
        Ok(Output::Report(rep)) => {
            let line = rep.to_json_line();
            if let Some(path) = &cli.output {
                let res = std::fs::OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(path)
                    .and_then(|mut f| writeln!(f, "{line}"));
                if let Err(e) = res {
                    return io_error(&e.to_string());
                }
            }
            if cli.json {
                println!("{line}");
            } else {
                print!("{}", rep.summary());
            }
            0
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

fn io_error(msg: &str) -> i32 {
    let e = CliError::new("output", obstructa::Error::validation(format!("cannot write output: {msg}")));
    eprintln!("{}", e.to_json());
    e.exit_code()
}
