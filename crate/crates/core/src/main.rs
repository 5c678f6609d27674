use std::io::{self, IsTerminal};
use std::process::ExitCode;

fn main() -> ExitCode {
    let terminal = io::stdout().is_terminal();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    ExitCode::from(citecheck::cli::run(
        std::env::args_os(),
        &mut out,
        &mut err,
        terminal,
    ))
}
