//! Small hand-built games used throughout the tests and examples.
//!
//! Each fixture lives under `fixtures/` as an ordinary game file, so the same
//! games are reachable from the command line (`jokers solve fixtures/g_avb.json`).

use std::path::PathBuf;

use crate::format;
use crate::game::ConcurrentGame;

/// Names of all bundled games, loadable with [`load`].
///
/// - `g_avb`: the two-condition game; both branches must be satisfied, and
///   Player 1 cannot force that without Jokers.
/// - `g_hope`: rank 1 everywhere, yet a cost-minimal strategy has an outcome
///   that wins with zero Jokers if the opponent cooperates.
/// - `g_cost`: the attractor strategy and the short strategy disagree on
///   path length (4 vs 3 steps) at the same Joker cost.
/// - `penny`: matching pennies; no deterministic force, but a coin flip
///   wins almost surely, so Joker and almost-sure ranks differ.
/// - `dom_left`, `dom_middle`, `dom_right`: three small arenas where
///   differently-ranked strategies dominate depending on the opponent.
pub const ALL: &[&str] = &[
    "g_avb", "g_hope", "g_cost", "penny", "dom_left", "dom_middle", "dom_right",
];

pub fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

/// Path of a bundled labeled-transition-system file (`vending` is the only
/// one so far).
pub fn aut_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.aut"))
}

/// Load a bundled game by name. Panics on unknown names or broken files —
/// fixtures are part of the crate, so either is a bug.
pub fn load(name: &str) -> ConcurrentGame {
    assert!(ALL.contains(&name), "unknown fixture {name:?}");
    format::load_game(&path(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}
