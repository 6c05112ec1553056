fn main() {
    std::process::exit(tori_cli::main_with_args());
}
