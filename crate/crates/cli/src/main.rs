use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let args = match envcap::Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match envcap::run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("envcap: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
