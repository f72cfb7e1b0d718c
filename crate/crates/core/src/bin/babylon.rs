fn main() {
    std::process::exit(babylon::cli::main_from_env());
}
