use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::init();
    ExitCode::from(measured_bath::cli::run(std::env::args_os()) as u8)
}
