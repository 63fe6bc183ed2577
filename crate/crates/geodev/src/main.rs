fn main() {
    std::process::exit(geodev::cli::main_with_args(std::env::args_os()));
}
