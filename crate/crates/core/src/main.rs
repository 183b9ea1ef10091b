fn main() {
    std::process::exit(psrsched::cli::main_with_args(std::env::args_os()));
}
