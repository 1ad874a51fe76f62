fn main() {
    std::process::exit(armastat::cli::run(std::env::args_os()));
}
