fn main() {
    std::process::exit(scv_cli::run(std::env::args_os()));
}
