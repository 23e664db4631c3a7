fn main() {
    std::process::exit(avmod::cli::run_main(std::env::args_os()));
}
