fn main() {
    std::process::exit(tremor::cli::run());
}
