use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(constdepth_cli::dispatch(std::env::args_os()))
}
