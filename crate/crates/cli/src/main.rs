fn main() {
    std::process::exit(mingap_cli::run(std::env::args_os()));
}
