fn main() {
    std::process::exit(extropy_kit::cli::run());
}
