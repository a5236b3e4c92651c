fn main() { std::process::exit(nonforcing::cli::main_with_args(std::env::args_os())) }
