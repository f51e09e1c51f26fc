fn main() {
    std::process::exit(roadfield::cli::main_with_args(std::env::args_os()));
}
