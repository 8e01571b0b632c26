fn main() {
    std::process::exit(weyltrace::cli::run());
}
