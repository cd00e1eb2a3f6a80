fn main() {
    std::process::exit(omegapaste::cli::run(std::env::args_os()));
}
