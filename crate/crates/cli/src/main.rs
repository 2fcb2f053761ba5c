use clap::error::ErrorKind;
use clap::Parser;
use obstructa_cli::{execute, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) => {
            let _ = e.print();
            std::process::exit(0);
        }
        Err(e) => {
            let err = serde_json::json!({
                "error": { "code": "usage", "exit_code": 2, "stage": "args", "message": e.to_string().trim() }
            });
            eprintln!("{err}");
            std::process::exit(2);
        }
    };
    std::process::exit(execute(&cli));
}
