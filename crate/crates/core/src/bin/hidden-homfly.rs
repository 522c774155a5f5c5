fn main() {
    std::process::exit(hidden_homfly::cli::main());
}
