fn main() {
    std::process::exit(phi_bessel::cli::run(std::env::args_os()));
}
