use std::process::ExitCode;

use clap::Parser;
use hyppoisson::{Cli, Command};

fn main() -> ExitCode {
    let config = Cli::parse().into_config();
    if config.command != Command::Verify {
        let il = config.i_lambda();
        eprintln!("Re(i lambda) = {} (i lambda = {} {:+}i)", il.re, il.re, il.im);
    }
    match hyppoisson::run(&config) {
        Ok(outcome) => {
            if !outcome.all_pass {
                eprintln!("one or more checks failed");
            }
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
