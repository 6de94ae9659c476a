fn main() {
    std::process::exit(bcn_duality::cli::run(std::env::args_os()));
}
