fn main() {
    std::process::exit(venuevec::cli::main());
}
