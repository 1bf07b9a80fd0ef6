fn main() {
    std::process::exit(btbs_cli::run(std::env::args_os()));
}
