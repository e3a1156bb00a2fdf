fn main() {
    std::process::exit(subsol::cli::run(std::env::args_os()));
}
