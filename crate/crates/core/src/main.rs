fn main() -> std::process::ExitCode {
    sakiadis::cli::main()
}
