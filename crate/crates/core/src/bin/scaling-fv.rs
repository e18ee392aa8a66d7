use std::io::{self, Write};
use std::process::ExitCode;

use scaling_fv::cli::{execute, parse_args, EXIT_OK, EXIT_USAGE};

fn main() -> ExitCode {
    let cmd = match parse_args(std::env::args_os().skip(1)) {
        Ok(cmd) => cmd,
        Err(e) if e.is_help => {
            print!("{e}");
            return ExitCode::from(EXIT_OK as u8);
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut diag = io::stderr();
    let code = execute(&cmd, &mut out, &mut diag);
    let _ = out.flush();
    ExitCode::from(code as u8)
}
