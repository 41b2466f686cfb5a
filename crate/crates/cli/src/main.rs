fn main() {
    std::process::exit(charged_drop_cli::run(std::env::args_os()));
}
