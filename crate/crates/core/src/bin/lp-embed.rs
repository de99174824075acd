fn main() -> std::process::ExitCode {
    lp_embed::cli::main()
}
