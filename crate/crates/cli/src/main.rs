fn main() {
    std::process::exit(knaster_lab::run(std::env::args_os()));
}
