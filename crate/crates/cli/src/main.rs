use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut out = String::new();
    let result = parrondo_cli::run(std::env::args_os(), &mut out);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string();
            eprintln!("parrondo: {}", msg.trim_end());
            ExitCode::from(e.exit_code())
        }
    }
}
