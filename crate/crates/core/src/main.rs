fn main() {
    std::process::exit(ion_sculpt::cli::run(std::env::args_os(), std::env::vars().collect()));
}
