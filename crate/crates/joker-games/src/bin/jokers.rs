fn main() {
    std::process::exit(joker_games::cli::run());
}
