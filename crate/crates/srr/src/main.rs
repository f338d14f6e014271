use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(srr::cli::run(std::env::args_os()))
}
