fn main() {
    std::process::exit(framelab::cli::run_cli(std::env::args_os()));
}
