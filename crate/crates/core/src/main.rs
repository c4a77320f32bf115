fn main() {
    std::process::exit(cue_genus::cli::run(std::env::args_os()));
}
