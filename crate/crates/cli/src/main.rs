fn main() {
    std::process::exit(fraclab_cli::main_with_args(std::env::args_os()));
}
