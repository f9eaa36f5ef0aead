fn main() {
    std::process::exit(qdiscrim::cli::run(std::env::args_os()));
}
