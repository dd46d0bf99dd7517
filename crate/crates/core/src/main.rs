fn main() {
    std::process::exit(laxmat::cli::run(std::env::args_os()));
}
