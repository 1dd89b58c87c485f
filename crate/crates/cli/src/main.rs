fn main() {
    std::process::exit(cpshift::app::main_with_args(std::env::args_os()));
}
