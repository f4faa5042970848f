fn main() {
    let _ = env_logger::Builder::from_default_env().try_init();
    std::process::exit(dff_cli::run(std::env::args_os()));
}
