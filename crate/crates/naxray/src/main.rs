fn main() {
    std::process::exit(naxray::cli::main_with(std::env::args_os()));
}
