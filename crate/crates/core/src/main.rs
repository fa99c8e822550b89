fn main() {
    std::process::exit(sixstate::cli::run());
}
