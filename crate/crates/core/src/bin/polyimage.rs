fn main() {
    std::process::exit(polyimage_core::cli::main_with_args(std::env::args_os()));
}
