use clap::error::ErrorKind;
use clap::Parser;

use conekit::cli::{self, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap defaults to exit code 2; here 2 is reserved for theorem
            // violations, so usage errors map to 1 and help/version to 0.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => cli::EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match cli::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(cli::EXIT_USAGE);
        }
    }
}
