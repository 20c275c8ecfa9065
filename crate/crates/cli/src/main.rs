fn main() {
    std::process::exit(chemoplan_cli::run(std::env::args_os()));
}
