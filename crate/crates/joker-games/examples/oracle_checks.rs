//! Cross-examine the layered solver with the brute-force oracles: value
//! iteration over a batch of random games, then an exhaustive sweep of
//! positional adversaries against the attractor strategy.
//!
//!     cargo run --example oracle_checks

use joker_games::attractor::joker_attractor;
use joker_games::cost::Cost;
use joker_games::fixtures;
use joker_games::generate::{random_game, GenParams};
use joker_games::oracle;
use joker_games::sim::{simulate_run, P1Policy};
use joker_games::strategy::joker_attractor_strategy;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    // Jacobi value iteration knows nothing about layers; agreement on
    // every state of every game is strong evidence for both.
    let params = GenParams::default();
    let mut agreed = 0;
    for seed in 0..200 {
        let g = random_game(&params, seed);
        let ja = joker_attractor(&g, g.goals());
        let vt = oracle::value_iterate(&g);
        for q in g.state_ids() {
            assert_eq!(vt.v(q), ja.j_rank(q), "seed {seed}");
            agreed += 1;
        }
    }
    println!("value iteration: {agreed} state values across 200 games, all equal to jRank");

    // Every positional opponent pair, every winnable start: the attractor
    // strategy wins and pays its rank exactly — never a Joker more.
    let g = fixtures::load("g_avb");
    let ja = joker_attractor(&g, g.goals());
    let strat = joker_attractor_strategy(&ja);
    let family = oracle::enumerate_adversaries(&g, 1_000_000).unwrap();
    println!(
        "adversary sweep: {} positional pairs on the two-condition game",
        family.count()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (p2, p3) in family.pairs() {
        for &q in ja.members() {
            let rec = simulate_run(&g, P1Policy::Strategy(&strat), &p2, &p3, q, 40, &mut rng);
            let Cost::Fin(rank) = ja.j_rank(q) else { unreachable!() };
            assert!(rec.reached(&g));
            assert_eq!(rec.jokers_spent(&g), Some(rank));
        }
    }
    println!("all plays reached the goal spending exactly jRank");
}
