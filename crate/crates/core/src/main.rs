fn main() {
    let (code, out) = tamestab::cli::run(std::env::args_os());
    print!("{out}");
    std::process::exit(code);
}
