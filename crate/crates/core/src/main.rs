fn main() -> std::process::ExitCode {
    ontocdm::cli::main_with_args(std::env::args_os()).into()
}
