fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(qmt_cli::run(&argv));
}
