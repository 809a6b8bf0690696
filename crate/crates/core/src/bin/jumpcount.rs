fn main() {
    std::process::exit(jumpcount::cli::run(std::env::args_os()));
}
