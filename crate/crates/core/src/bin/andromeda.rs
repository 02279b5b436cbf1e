fn main() -> std::process::ExitCode {
    andromeda::cli::main()
}
