use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = monotone_cli::run(std::env::args_os());
    let text = result.rendered();
    if result.exit_code == monotone_cli::EXIT_USAGE && result.machine_output.is_none() {
        let _ = std::io::stderr().write_all(text.as_bytes());
    } else {
        let _ = std::io::stdout().write_all(text.as_bytes());
    }
    ExitCode::from(result.exit_code as u8)
}
