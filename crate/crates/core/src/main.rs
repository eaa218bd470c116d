fn main() -> std::process::ExitCode {
    sumprod::cli::main_entry()
}
