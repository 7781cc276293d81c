fn main() {
    std::process::exit(orcap_cli::cli_main(std::env::args_os()));
}
