//! Solve a game and print its rank table: how many Jokers each state needs,
//! and where those Jokers must be played.
//!
//!     cargo run --example solve_ranks

use joker_games::attractor::joker_attractor;
use joker_games::fixtures;
use joker_games::report::{rank_table, Format};

fn main() {
    let game = fixtures::load("g_avb");
    let ja = joker_attractor(&game, game.goals());

    // aRank is the classic forced-win layer (infinite almost everywhere
    // here: Player 2 can dodge), jRank counts the Jokers that close the gap.
    let table = rank_table(&game, &ja, None);
    print!("{}", table.render(Format::Table));

    println!();
    println!("joker states (a Joker must be played there, or the win is lost):");
    for &q in &ja.joker_states() {
        let (a, x, to) = ja.joker_witness[&q][0];
        println!(
            "  {}: joker ({}, {}, {})",
            game.state_name(q),
            game.act1_name(a),
            game.act2_name(x),
            game.state_name(to),
        );
    }

    println!();
    println!("cumulative layers (winnable with <= k Jokers):");
    for (k, layer) in ja.layers.iter().enumerate() {
        let names: Vec<&str> = layer.iter().map(|&q| game.state_name(q)).collect();
        println!("  layer {k}: {{{}}}", names.join(", "));
    }
}
