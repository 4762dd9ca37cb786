fn main() {
    std::process::exit(lrc::cli::run());
}
