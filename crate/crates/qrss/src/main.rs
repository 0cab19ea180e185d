fn main() {
    std::process::exit(qrss::cli::run());
}
