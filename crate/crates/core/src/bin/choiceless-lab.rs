use std::io::Write;

use choiceless_lab::cli::{run, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_REFUTED};

fn main() {
    let (code, text) = run(std::env::args_os());
    let _ = if matches!(code, EXIT_OK | EXIT_REFUTED | EXIT_INCONCLUSIVE) {
        std::io::stdout().write_all(text.as_bytes())
    } else {
        std::io::stderr().write_all(text.as_bytes())
    };
    std::process::exit(code);
}
