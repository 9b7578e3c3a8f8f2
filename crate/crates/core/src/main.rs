fn main() {
    std::process::exit(quatstbc::cli::main());
}
