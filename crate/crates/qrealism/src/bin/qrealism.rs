use std::process::ExitCode;

fn main() -> ExitCode {
    qrealism::cli::run()
}
