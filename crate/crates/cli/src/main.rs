//! `sepchoice`: classify joint choice data as separable, entangled or signaling.

mod args;
mod commands;
mod report;
mod selftest;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

/// A failed command: what to print and how to exit.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl std::fmt::Display) -> Self {
        Self {
            code: 2,
            message: message.to_string(),
        }
    }

    pub fn internal(message: impl std::fmt::Display) -> Self {
        Self {
            code: 1,
            message: message.to_string(),
        }
    }
}

impl From<sepchoice::Error> for Failure {
    fn from(e: sepchoice::Error) -> Self {
        match e {
            sepchoice::Error::CertificateCheck(_) => Failure::internal(e),
            _ => Failure::input(e),
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Validate(a) => commands::validate(&a),
        Command::Check(a) => commands::check(&a),
        Command::Chsh(a) => commands::chsh(&a),
        Command::Hrep(a) => commands::hrep(&a),
        Command::Generate(a) => commands::generate(&a),
        Command::Certify(a) => commands::certify(&a),
        Command::Selftest(a) => selftest::run(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
