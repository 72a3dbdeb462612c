use std::process::ExitCode;

use dqjulia_cli::{parse_config, run, ConfigError};

fn main() -> ExitCode {
    let invocation = match parse_config(std::env::args_os()) {
        Ok(inv) => inv,
        // help and usage errors
        Err(ConfigError::Cli(e)) => e.exit(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if invocation.dump_config {
        print!("{}", invocation.config.to_document());
        return ExitCode::SUCCESS;
    }
    match run(&invocation.config) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
