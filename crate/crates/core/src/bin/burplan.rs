fn main() {
    std::process::exit(bur_planner::cli::main());
}
