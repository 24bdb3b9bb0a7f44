fn main() {
    std::process::exit(hermite_persist::cli::run(std::env::args_os()));
}
