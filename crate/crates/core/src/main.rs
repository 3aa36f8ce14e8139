use std::io::Write;
use std::process::ExitCode;

use birthday_bounds::cli::run_args;
use birthday_bounds::tail::MAX_ORDER_ENV;

fn main() -> ExitCode {
    let env_cap = std::env::var(MAX_ORDER_ENV).ok();
    let outcome = run_args(std::env::args_os(), env_cap.as_deref());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
