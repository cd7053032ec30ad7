use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(apolar::cli::run(std::env::args()) as u8)
}
