fn main() {
    std::process::exit(ybekit::cli::main_with_args(std::env::args_os()));
}
