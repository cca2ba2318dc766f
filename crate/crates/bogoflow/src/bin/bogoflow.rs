fn main() {
    std::process::exit(bogoflow::cli::run(std::env::args_os()));
}
