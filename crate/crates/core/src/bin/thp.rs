fn main() {
    std::process::exit(tempered_hermite::cli::main_with_args(std::env::args_os()));
}
