use clap::error::ErrorKind;
use clap::Parser;

use dit_cli::args::Cli;
use dit_cli::{commands, config};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version are requested output, not failures.
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let run_config = match config::build_config(&cli) {
        Ok(rc) => rc,
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    };
    std::process::exit(commands::run(&run_config));
}
