//! Concurrent reachability games with Joker moves.
//!
//! A concurrent game is played on a finite arena by two players who pick
//! actions simultaneously; a nondeterministic environment then resolves the
//! joint move to a successor state. Player 1 tries to reach a goal state.
//! Where she cannot force this, she may spend a *Joker*: a special move that
//! fixes both players' actions and the resolution for one step. Jokers model
//! cooperation that is expected but not guaranteed — the interesting
//! questions are how few suffice, and where they must be spent.
//!
//! The crate computes winning regions and Joker ranks ([`attractor`]),
//! synthesizes minimal-Joker and shortest-path strategies ([`strategy`]),
//! handles almost-sure winning with randomization ([`prob`]), and applies the
//! whole pipeline to model-based testing ([`mbt`]). Independent
//! cross-checking oracles live in [`oracle`]. See the `examples/` directory
//! for end-to-end tours.

pub mod attractor;
pub mod cli;
pub mod cost;
pub mod fixtures;
pub mod format;
pub mod game;
pub mod generate;
pub mod joker;
pub mod mbt;
pub mod oracle;
pub mod prob;
pub mod report;
pub mod sim;
pub mod strategy;
