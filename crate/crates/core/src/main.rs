fn main() {
    ctwalk::exec::init_thread_pool_from_env();
    std::process::exit(ctwalk::cli::main_with_args(std::env::args_os()));
}
