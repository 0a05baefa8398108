fn main() {
    std::process::exit(misdp::cli::main_with_args(std::env::args_os()));
}
