fn main() {
    std::process::exit(wavemark::cli::run(std::env::args_os()));
}
