fn main() {
    std::process::exit(lpflux::cli::run(std::env::args_os()));
}
