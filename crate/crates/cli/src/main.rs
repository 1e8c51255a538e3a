mod args;
mod commands;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Failure classes, mapped to the process exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<ocdmst::Error> for Failure {
    fn from(e: ocdmst::Error) -> Self {
        if e.is_config_error() {
            Failure::Usage(e.to_string())
        } else if e.is_data_error() {
            Failure::Data(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Eval(a) => commands::eval(a),
        Command::Grid(a) => commands::grid(a, false),
        Command::Sweep(a) => commands::grid(a, true),
        Command::Predict(a) => commands::predict(a),
        Command::ValidateData(a) => commands::validate_data(a),
        Command::Summarize(a) => commands::summarize(a),
        Command::Logistic(a) => commands::logistic(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f);
            ExitCode::from(f.code())
        }
    }
}
