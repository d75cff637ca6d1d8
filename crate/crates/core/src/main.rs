fn main() {
    std::process::exit(netvoi::cli::run_command(std::env::args_os()));
}
