fn main() {
    std::process::exit(ragfront::cli::run_command(std::env::args_os()));
}
