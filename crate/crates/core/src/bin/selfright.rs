fn main() -> std::process::ExitCode {
    selfright::cli::main()
}
