fn main() {
    std::process::exit(polyriesz::cli::run(std::env::args_os()));
}
