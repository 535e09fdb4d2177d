fn main() {
    std::process::exit(practical_numbers::cli::run(std::env::args_os()));
}
