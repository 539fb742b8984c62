//! Spending more Jokers can buy robustness. Against reactive opponents the
//! flattened (Joker-free) projections of two winning strategies can differ:
//! the expensive detour survives an opponent that the optimum loses to, and
//! a patient self-loop survives an opening feint that kills the direct dash.
//!
//!     cargo run --example dominance

use joker_games::attractor::joker_attractor;
use joker_games::fixtures;
use joker_games::joker::{strategy_cost, JokerAction, PositionalStrategy};
use joker_games::oracle::dominance_compare;
use joker_games::sim::{P2Script, P3Script};
use joker_games::strategy::joker_attractor_strategy;

fn main() {
    let g = fixtures::load("dom_middle");
    let id = |n: &str| g.state_id(n).unwrap();
    let a1 = |n: &str| g.act1_id(n).unwrap();
    let a2 = |n: &str| g.act2_id(n).unwrap();

    // The cheap route: one Joker, straight through state 3.
    let one_joker = joker_attractor_strategy(&joker_attractor(&g, g.goals()));
    // The dear route: regular into state 2, then two Jokers.
    let mut two_joker = PositionalStrategy::new("detour");
    two_joker.choice.insert(id("1"), JokerAction::Regular(a1("a")));
    two_joker.choice.insert(
        id("2"),
        JokerAction::Joker { a: a1("a"), x: a2("h"), to: id("3") },
    );
    two_joker.choice.insert(
        id("3"),
        JokerAction::Joker { a: a1("a"), x: a2("h"), to: id("smiley") },
    );
    println!(
        "worst-case bills from state 1: {} vs {} Jokers",
        strategy_cost(&g, &one_joker, g.initial()),
        strategy_cost(&g, &two_joker, g.initial()),
    );

    // Flatten both and face an opponent that punishes the b-move the cheap
    // strategy opens with. The projections are Joker-free, so nothing
    // shields them from reactions anymore.
    let react_to_b = P2Script::LastAction {
        rules: [(a1("b"), a2("u"))].into_iter().collect(),
        default: a2("h"),
    };
    let report = dominance_compare(
        &g,
        &two_joker.inspired(),
        &one_joker.inspired(),
        &[(react_to_b, P3Script::First)],
        g.initial(),
        32,
    );
    println!(
        "vs the react-to-b opponent: detour wins {:?}, optimum wins {:?}  ->  {:?}",
        report.left_wins, report.right_wins, report.verdict,
    );

    // Second game, same lesson from the other side: the opponent feints u
    // once and then stays on h. Action a dashes into the trap; action b
    // loops safely and collects the win a round later.
    let g = fixtures::load("dom_right");
    let pick = |name: &str| {
        let mut s = PositionalStrategy::new(name);
        s.choice.insert(
            g.state_id("1").unwrap(),
            JokerAction::Regular(g.act1_id(name).unwrap()),
        );
        s
    };
    let feint = P2Script::Phased {
        first: g.act2_id("u").unwrap(),
        rest: g.act2_id("h").unwrap(),
    };
    let report = dominance_compare(
        &g,
        &pick("b"),
        &pick("a"),
        &[(feint, P3Script::First)],
        g.initial(),
        32,
    );
    println!(
        "vs the feint:            patient wins {:?}, dash wins {:?}  ->  {:?}",
        report.left_wins, report.right_wins, report.verdict,
    );
}
