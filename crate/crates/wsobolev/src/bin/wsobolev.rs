fn main() {
    std::process::exit(wsobolev::verify::cli::run(std::env::args_os()));
}
