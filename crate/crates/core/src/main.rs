fn main() {
    std::process::exit(conformal_bounds::cli::run(std::env::args_os()));
}
