fn main() {
    std::process::exit(cylshock::cli::cli_main(std::env::args_os()));
}
