use std::process::ExitCode;

use clap::Parser;
use shiftlab_cli::app::{execute, Cli};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = Cli::parse_from(&args);
    ExitCode::from(execute(&cli, &args) as u8)
}
