fn main() {
    std::process::exit(fcp::cli::main());
}
