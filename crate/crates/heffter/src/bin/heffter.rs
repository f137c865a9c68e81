fn main() {
    let code = heffter::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
