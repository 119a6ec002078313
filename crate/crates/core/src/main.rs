fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let outcome = qptheta::cli::run_command(&argv);
    if !outcome.stdout.is_empty() {
        print!("{}", outcome.stdout);
    }
    if !outcome.stderr.is_empty() {
        eprint!("{}", outcome.stderr);
    }
    std::process::exit(outcome.code);
}
