use std::process::ExitCode;

fn main() -> ExitCode {
    let mut out = std::io::stdout();
    ExitCode::from(fgkit_cli::run(std::env::args_os(), &mut out) as u8)
}
