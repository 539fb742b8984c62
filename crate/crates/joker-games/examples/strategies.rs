//! Synthesize the two positional strategies the solver offers and compare
//! their outcomes: same Joker bill, different number of moves.
//!
//!     cargo run --example strategies

use joker_games::attractor::joker_attractor;
use joker_games::fixtures;
use joker_games::joker::outcome_summary;
use joker_games::report::strategy_doc;
use joker_games::strategy::{distances, joker_attractor_strategy, short_joker_strategy};

fn main() {
    let game = fixtures::load("g_cost");
    let ja = joker_attractor(&game, game.goals());
    let start = game.state_id("1").unwrap();

    let dt = distances(&game, &ja);
    println!(
        "from state 1 the goal is {} moves away (spending jRank = {} Joker)",
        dt.d[start.0],
        ja.j_rank(start)
    );
    println!();

    for strat in [
        joker_attractor_strategy(&ja),
        short_joker_strategy(&game, &ja),
    ] {
        let s = outcome_summary(&game, &strat, start);
        println!(
            "{:<9} wins: {}, moves {}..{}, jokers {}..{}",
            strat.label,
            s.winning,
            s.min_moves.unwrap(),
            s.max_moves.unwrap(),
            s.min_jokers.unwrap(),
            s.max_jokers.unwrap(),
        );
        print!("{}", strategy_doc(&game, &strat).render());
        println!();
    }

    // The flattened variant plays the hoped-for action of each Joker and
    // never spends anything — at the price of losing the guarantee.
    let inspired = joker_attractor_strategy(&ja).inspired();
    println!("inspired (plain actions only):");
    print!("{}", strategy_doc(&game, &inspired).render());
}
