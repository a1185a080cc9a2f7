fn main() {
    std::process::exit(xfc::cli::main_with_args(std::env::args_os()));
}
