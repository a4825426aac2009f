fn main() {
    std::process::exit(wavemix::cli::run(std::env::args()));
}
