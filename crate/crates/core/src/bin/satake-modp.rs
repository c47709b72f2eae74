fn main() {
    std::process::exit(satake_modp::cli::main_with_args(std::env::args_os()));
}
