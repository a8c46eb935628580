fn main() {
    std::process::exit(dirdescent::cli::run_cli(std::env::args_os()));
}
