fn main() {
    std::process::exit(qaoa_ring_cli::run(std::env::args_os()));
}
