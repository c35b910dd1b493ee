fn main() {
    std::process::exit(parisian_cli::run(std::env::args_os()));
}
