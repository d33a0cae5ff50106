fn main() {
    std::process::exit(cesnet_cli::run(std::env::args_os()));
}
