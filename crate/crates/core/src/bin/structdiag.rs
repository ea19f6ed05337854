fn main() {
    std::process::exit(structdiag::cli::cli_main(std::env::args_os()));
}
