fn main() {
    std::process::exit(adialab::cli::run_command(std::env::args_os()));
}
