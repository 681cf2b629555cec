fn main() {
    std::process::exit(lobsim::cli::main_with_args(std::env::args_os()));
}
