use clap::error::ErrorKind;
use clap::Parser;
use nfzwda_cli::{run, Cli};

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => match run(cli) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            let _ = e.print();
            code
        }
    }
}
