fn main() {
    std::process::exit(hyperllm_cli::run_command(std::env::args_os()));
}
