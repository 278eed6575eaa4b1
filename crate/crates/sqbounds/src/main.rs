fn main() {
    std::process::exit(sqbounds::cli::run());
}
