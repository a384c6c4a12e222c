fn main() {
    std::process::exit(wikidiv_cli::dispatch(std::env::args_os()));
}
