fn main() {
    std::process::exit(disc::cli::run(std::env::args_os()));
}
