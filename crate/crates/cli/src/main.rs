fn main() {
    std::process::exit(symba_cli::app::run_cli(std::env::args_os()));
}
