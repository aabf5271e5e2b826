use std::process::ExitCode;

fn main() -> ExitCode {
    fracbvp::cli::main_from_env()
}
