fn main() {
    std::process::exit(hecke_packets::cli::run());
}
