fn main() {
    std::process::exit(rezk::cli::main());
}
