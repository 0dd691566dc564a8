use std::io::Write;

fn main() {
    let (code, report) = ocreach_cli::run(std::env::args_os());
    // A closed pipe downstream is not an error worth reporting.
    let _ = if code == ocreach_cli::EXIT_OK || code == ocreach_cli::EXIT_FAILURE {
        writeln!(std::io::stdout(), "{report}")
    } else {
        writeln!(std::io::stderr(), "{report}")
    };
    std::process::exit(code);
}
