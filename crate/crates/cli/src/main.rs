fn main() {
    std::process::exit(sparseperm_cli::main_with(std::env::args_os()));
}
