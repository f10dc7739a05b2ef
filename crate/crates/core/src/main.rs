fn main() {
    std::process::exit(quadlat::cli::run(std::env::args_os()));
}
