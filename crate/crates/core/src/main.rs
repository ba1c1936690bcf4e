fn main() -> std::process::ExitCode {
    sgf_secrecy::cli::run(std::env::args_os())
}
