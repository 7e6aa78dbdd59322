fn main() {
    std::process::exit(contfrac::cli::main_with_args(std::env::args_os()));
}
