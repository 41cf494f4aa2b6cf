fn main() {
    std::process::exit(caseform_cli::run(std::env::args_os()));
}
