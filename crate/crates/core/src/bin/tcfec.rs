fn main() {
    std::process::exit(tcfec::cli::run_cli(std::env::args_os()));
}
