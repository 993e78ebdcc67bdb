fn main() {
    std::process::exit(adesieve::run(std::env::args_os()));
}
