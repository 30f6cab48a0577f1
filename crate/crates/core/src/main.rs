fn main() {
    std::process::exit(tterel::cli::run());
}
