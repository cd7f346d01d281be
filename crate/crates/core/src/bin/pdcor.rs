fn main() {
    std::process::exit(pdcor::cli::run(std::env::args_os()));
}
