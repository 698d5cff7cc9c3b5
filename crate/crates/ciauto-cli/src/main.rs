fn main() {
    std::process::exit(ciauto_cli::run(std::env::args_os()));
}
