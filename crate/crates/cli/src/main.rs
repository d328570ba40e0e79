fn main() {
    std::process::exit(anticipated_surprise_cli::run_cli(std::env::args()));
}
