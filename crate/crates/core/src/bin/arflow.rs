fn main() {
    std::process::exit(arflow::cli::main_with(std::env::args_os()));
}
