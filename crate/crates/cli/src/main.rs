fn main() {
    std::process::exit(goldberg_lab_cli::run());
}
