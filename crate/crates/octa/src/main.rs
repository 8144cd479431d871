fn main() {
    std::process::exit(octa::cli::dispatch_env());
}
