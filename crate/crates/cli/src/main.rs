use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(fracvar_cli::run(std::env::args_os()))
}
