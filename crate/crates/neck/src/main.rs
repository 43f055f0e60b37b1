fn main() {
    std::process::exit(neck::cli::main_with_args(std::env::args_os()));
}
