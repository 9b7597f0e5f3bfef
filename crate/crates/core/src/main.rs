use std::io::Write;

fn main() {
    let o = spinprolong::cli::run(std::env::args_os());
    let _ = std::io::stdout().write_all(o.stdout.as_bytes());
    let _ = std::io::stderr().write_all(o.stderr.as_bytes());
    std::process::exit(o.code);
}
