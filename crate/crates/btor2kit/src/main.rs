use std::process::ExitCode;

fn main() -> ExitCode {
    btor2kit::cli::main()
}
