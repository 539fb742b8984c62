//! Deterministic ranks charge a Joker where randomization wins for free.
//! The coin-matching game needs one Joker under sure semantics and none
//! almost surely: mixing H and T hits the match with probability 1.
//!
//!     cargo run --example almost_sure

use joker_games::attractor::joker_attractor;
use joker_games::fixtures;
use joker_games::prob::{monte_carlo, p_joker_attractor, prob_joker_strategy};
use joker_games::report::{rank_table, Format};

fn main() {
    let game = fixtures::load("penny");
    let ja = joker_attractor(&game, game.goals());
    let pja = p_joker_attractor(&game, game.goals());

    print!("{}", rank_table(&game, &ja, Some(&pja)).render(Format::Table));
    println!();

    let strat = prob_joker_strategy(&pja);
    let one = game.state_id("1").unwrap();
    let support: Vec<&str> = strat.support[&one]
        .iter()
        .map(|&a| game.act1_name(a))
        .collect();
    println!("support at state 1: {{{}}}", support.join(", "));

    let mc = monte_carlo(&game, &strat, one, 10_000, 10 * game.n_states(), 7);
    println!(
        "{} of {} seeded runs reached the goal (jokers {}..{}, longest win {} steps)",
        mc.reached,
        mc.runs,
        mc.min_jokers.unwrap(),
        mc.max_jokers.unwrap(),
        mc.max_steps_won.unwrap(),
    );
}
