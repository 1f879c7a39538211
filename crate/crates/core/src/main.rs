fn main() {
    std::process::exit(qnetplan::cli::cli_main(std::env::args_os()));
}
