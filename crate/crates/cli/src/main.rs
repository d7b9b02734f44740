mod args;
mod commands;
mod files;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Fit(a) => commands::fit(a),
        Command::Apply(a) => commands::apply(a),
        Command::Eval(a) => commands::eval(a),
        Command::BoundReport(a) => commands::bound_report(a),
        Command::Tightness(a) => commands::tightness(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Center(a) => commands::center(a),
        Command::Fuse(a) => commands::fuse_cmd(a),
        Command::Neighbors(a) => commands::neighbors(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
