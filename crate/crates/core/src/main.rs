fn main() {
    std::process::exit(srur::cli::run(std::env::args_os()));
}
