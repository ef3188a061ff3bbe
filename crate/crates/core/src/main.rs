fn main() {
    std::process::exit(centralizer_lab::cli::run(std::env::args_os()));
}
