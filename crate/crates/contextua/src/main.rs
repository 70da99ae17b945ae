fn main() {
    std::process::exit(contextua::cli::main_entry());
}
