fn main() {
    std::process::exit(weyl_cli::run());
}
