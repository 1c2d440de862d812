fn main() {
    std::process::exit(fiberatlas::cli::run(std::env::args_os()));
}
