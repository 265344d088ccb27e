fn main() {
    std::process::exit(pevbar::cli::run_from(std::env::args_os()));
}
