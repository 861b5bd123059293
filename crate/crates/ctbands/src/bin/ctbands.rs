fn main() {
    std::process::exit(ctbands::cli::main_with_args(std::env::args_os()));
}
