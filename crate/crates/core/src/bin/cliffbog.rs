fn main() {
    std::process::exit(cliffbog::cli::run());
}
