fn main() {
    std::process::exit(riccati::cli::run(std::env::args_os()));
}
