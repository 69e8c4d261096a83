fn main() {
    std::process::exit(extremal_gamma::cli::run());
}
