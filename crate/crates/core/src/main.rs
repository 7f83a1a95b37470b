fn main() {
    std::process::exit(xcoref::cli::run_cli(std::env::args_os()));
}
