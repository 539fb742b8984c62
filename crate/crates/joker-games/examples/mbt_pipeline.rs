//! The full testing pipeline: generate a specification model, turn it into
//! a tester-vs-system game, derive a goal-directed tester from the Joker
//! solution, and race it against random exploration. The derived tester
//! plays the hoped-for actions of the Joker strategy — no actual Jokers —
//! so the comparison is fair.
//!
//!     cargo run --example mbt_pipeline

use joker_games::mbt::{
    self, lts_to_game, random_lts, run_experiment, stats_csv, summarize, summary_table,
    LtsParams,
};

fn main() {
    let params = LtsParams {
        states: 60,
        inputs: 3,
        outputs: 3,
        extra: 60,
    };
    let lts = random_lts(&params, 40);
    let game = lts_to_game(&lts).expect("generated models translate");
    println!(
        "model: {} states, {} transitions  ->  game: {} states",
        lts.n_states,
        lts.transitions.len(),
        game.n_states()
    );
    println!();

    // Two testers per goal, 500 runs each, same simulated system under
    // test (uniform over its enabled behaviours). The campaign seed fixes
    // every run.
    let mut stats = Vec::new();
    for goal_name in ["11", "50", "30"] {
        let goal = game.state_id(goal_name).expect("goal exists");
        let (joker, random) = run_experiment(&game, goal, 500, 2024, 10 * game.n_states());
        stats.push(joker);
        stats.push(random);
    }
    print!("{}", stats_csv(&stats));
    println!();
    print!("{}", summary_table(&summarize(&stats)));

    // The same .aut text a file would carry round-trips through the parser.
    let text = mbt::write_aut(&lts);
    let back = mbt::parse_aut(&text).expect("own output parses");
    assert_eq!(back.transitions.len(), lts.transitions.len());
}
