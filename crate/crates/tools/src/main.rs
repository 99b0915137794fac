fn main() {
    std::process::exit(edgegame_tools::cli::run(std::env::args_os()));
}
