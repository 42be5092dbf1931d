fn main() {
    std::process::exit(qutrit_dfs_cli::main_with_args(std::env::args_os()));
}
