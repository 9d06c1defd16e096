use std::io::Write;

fn main() {
    let out = spectral_turan_cli::run(std::env::args_os());
    // Ignore broken pipes so that piping into `head` exits quietly.
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
