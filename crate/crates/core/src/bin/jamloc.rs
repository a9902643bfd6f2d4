fn main() {
    let code = jamloc::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
