fn main() {
    std::process::exit(potentia_cli::run(std::env::args_os()));
}
