fn main() {
    std::process::exit(arclab::cli::main_with_env());
}
