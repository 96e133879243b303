fn main() {
    std::process::exit(lu_invariants::cli::main_with_args(std::env::args_os()));
}
