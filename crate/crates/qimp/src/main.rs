fn main() {
    std::process::exit(qimp::cli::run());
}
