fn main() {
    std::process::exit(ramseylab::cli::run(std::env::args_os()));
}
