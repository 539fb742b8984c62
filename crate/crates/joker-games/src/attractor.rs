//! Attractor computations: who can force reaching a target set, and — when
//! force is not enough — how many Jokers bridge the gaps.
//!
//! The classical attractor grows a target set through the controllable
//! predecessor `CPre₁` (Player 1 forces entry no matter what). The Joker
//! attractor alternates that with the plain predecessor `Pre` (some move
//! enters, which a Joker can select): layer `k` holds exactly the states
//! winnable with at most `k` Jokers. Both computations record *witnesses* —
//! the actions (or Joker triples) that justify each state's membership — as
//! raw material for strategy synthesis.

use std::collections::{BTreeMap, BTreeSet};

use crate::cost::Cost;
use crate::game::{Act1Id, Act2Id, ConcurrentGame, StateId};

/// States with some move into `set`.
pub fn pre(game: &ConcurrentGame, set: &BTreeSet<StateId>) -> BTreeSet<StateId> {
    game.state_ids()
        .filter(|&q| {
            game.enabled1(q).iter().any(|&a| {
                game.enabled2(q)
                    .iter()
                    .any(|&x| game.moves(q, a, x).iter().any(|t| set.contains(t)))
            })
        })
        .collect()
}

/// States where some Player 1 action confines every resolution to `set`.
pub fn cpre1(game: &ConcurrentGame, set: &BTreeSet<StateId>) -> BTreeSet<StateId> {
    game.state_ids()
        .filter(|&q| !cpre1_witnesses(game, q, set).is_empty())
        .collect()
}

/// The Player 1 actions witnessing `q ∈ CPre₁(set)`.
pub fn cpre1_witnesses(game: &ConcurrentGame, q: StateId, set: &BTreeSet<StateId>) -> Vec<Act1Id> {
    game.enabled1(q)
        .iter()
        .copied()
        .filter(|&a| {
            game.enabled2(q)
                .iter()
                .all(|&x| game.moves(q, a, x).iter().all(|t| set.contains(t)))
        })
        .collect()
}

/// The `(a, x, q′)` triples witnessing `q ∈ Pre(set)`: every enabled pair
/// and resolution landing in `set`, in lexicographic order.
pub fn pre_witnesses(
    game: &ConcurrentGame,
    q: StateId,
    set: &BTreeSet<StateId>,
) -> Vec<(Act1Id, Act2Id, StateId)> {
    let mut out = Vec::new();
    for &a in game.enabled1(q) {
        for &x in game.enabled2(q) {
            for &t in game.moves(q, a, x) {
                if set.contains(&t) {
                    out.push((a, x, t));
                }
            }
        }
    }
    out
}

/// States with some path into `targets` (cooperative reachability — every
/// choice, including the opponent's, may help). This is the outer limit of
/// every attractor variant: win sets can never exceed it.
pub fn can_reach(game: &ConcurrentGame, targets: &BTreeSet<StateId>) -> BTreeSet<StateId> {
    let mut reach = targets.clone();
    loop {
        let grown = pre(game, &reach);
        let before = reach.len();
        reach.extend(grown);
        if reach.len() == before {
            return reach;
        }
    }
}

/// A classical attractor with per-state ranks and forcing witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attractor {
    pub targets: BTreeSet<StateId>,
    /// Least layer containing the state (`0` on targets, `∞` outside).
    pub rank: Vec<Cost>,
    /// Cumulative layers; `layers[0]` is the target set.
    pub layers: Vec<BTreeSet<StateId>>,
    /// For every member added at layer ≥ 1: all forcing actions available at
    /// its adding layer, sorted. The first entry is the canonical choice.
    pub witness: BTreeMap<StateId, Vec<Act1Id>>,
}

impl Attractor {
    pub fn members(&self) -> &BTreeSet<StateId> {
        self.layers.last().expect("at least the target layer")
    }

    pub fn contains(&self, q: StateId) -> bool {
        self.rank[q.0].is_finite()
    }

    pub fn canonical_witness(&self, q: StateId) -> Option<Act1Id> {
        self.witness.get(&q).map(|w| w[0])
    }
}

/// Least fixed point of `X ↦ targets ∪ CPre₁(X)`.
pub fn attractor(game: &ConcurrentGame, targets: &BTreeSet<StateId>) -> Attractor {
    let mut rank = vec![Cost::Inf; game.n_states()];
    for &q in targets {
        rank[q.0] = Cost::ZERO;
    }
    let mut layers = vec![targets.clone()];
    let mut witness = BTreeMap::new();
    loop {
        let current = layers.last().unwrap();
        let mut next = current.clone();
        let mut added = Vec::new();
        for q in game.state_ids() {
            if current.contains(&q) {
                continue;
            }
            let w = cpre1_witnesses(game, q, current);
            if !w.is_empty() {
                next.insert(q);
                added.push((q, w));
            }
        }
        if added.is_empty() {
            return Attractor {
                targets: targets.clone(),
                rank,
                layers,
                witness,
            };
        }
        let k = layers.len() as u64;
        for (q, w) in added {
            rank[q.0] = Cost::Fin(k);
            witness.insert(q, w);
        }
        layers.push(next);
    }
}

/// The full Joker attractor analysis of a game for one goal set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JokerAttractor {
    pub goals: BTreeSet<StateId>,
    /// `Attr(G, goals)` — layer 0, the states needing no Jokers at all.
    pub base: Attractor,
    /// Least Joker layer containing the state (`∞` outside the fixed point).
    pub j_rank: Vec<Cost>,
    pub joker_state: Vec<bool>,
    /// Cumulative Joker layers; `layers[k]` is winnable with ≤ k Jokers.
    pub layers: Vec<BTreeSet<StateId>>,
    /// `joker_layers[i]` = `Pre(layers[i])`, the (i+1)-th Joker layer.
    pub joker_layers: Vec<BTreeSet<StateId>>,
    /// `inner[i]` = attractor toward `joker_layers[i]`; its witnesses steer
    /// rank-(i+1) non-Joker states to their layer's Joker states.
    pub inner: Vec<Attractor>,
    /// For each Joker state: the `(a, x, q′)` triples into the previous
    /// layer, sorted. The first entry is the canonical Joker move.
    pub joker_witness: BTreeMap<StateId, Vec<(Act1Id, Act2Id, StateId)>>,
}

impl JokerAttractor {
    pub fn members(&self) -> &BTreeSet<StateId> {
        self.layers.last().expect("at least layer 0")
    }

    pub fn contains(&self, q: StateId) -> bool {
        self.j_rank[q.0].is_finite()
    }

    pub fn j_rank(&self, q: StateId) -> Cost {
        self.j_rank[q.0]
    }

    pub fn a_rank(&self, q: StateId) -> Cost {
        self.base.rank[q.0]
    }

    pub fn is_joker_state(&self, q: StateId) -> bool {
        self.joker_state[q.0]
    }

    pub fn joker_states(&self) -> BTreeSet<StateId> {
        self.joker_state
            .iter()
            .enumerate()
            .filter(|(_, &j)| j)
            .map(|(i, _)| StateId(i))
            .collect()
    }
}

/// Alternate attractor and predecessor steps until nothing new is winnable.
pub fn joker_attractor(game: &ConcurrentGame, goals: &BTreeSet<StateId>) -> JokerAttractor {
    let base = attractor(game, goals);
    let mut j_rank = vec![Cost::Inf; game.n_states()];
    for &q in base.members() {
        j_rank[q.0] = Cost::ZERO;
    }
    let mut joker_state = vec![false; game.n_states()];
    let mut layers = vec![base.members().clone()];
    let mut joker_layers = Vec::new();
    let mut inner = Vec::new();
    let mut joker_witness = BTreeMap::new();

    loop {
        let current = layers.last().unwrap().clone();
        let spade = pre(game, &current);
        for &q in spade.difference(&current) {
            joker_state[q.0] = true;
            joker_witness.insert(q, pre_witnesses(game, q, &current));
        }
        let inner_att = attractor(game, &spade);
        let next: BTreeSet<StateId> = current.union(inner_att.members()).copied().collect();
        if next == current {
            return JokerAttractor {
                goals: goals.clone(),
                base,
                j_rank,
                joker_state,
                layers,
                joker_layers,
                inner,
                joker_witness,
            };
        }
        let k = layers.len() as u64;
        for &q in next.difference(&current) {
            j_rank[q.0] = Cost::Fin(k);
        }
        layers.push(next);
        joker_layers.push(spade);
        inner.push(inner_att);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(game: &ConcurrentGame, names: &[&str]) -> BTreeSet<StateId> {
        names.iter().map(|n| game.state_id(n).unwrap()).collect()
    }

    #[test]
    fn two_condition_game_layer_structure() {
        let g = fixtures::load("g_avb");
        let ja = joker_attractor(&g, g.goals());
        assert_eq!(ja.layers.len(), 3);
        assert_eq!(ja.layers[0], set(&g, &["smiley"]));
        assert_eq!(ja.layers[1], set(&g, &["1", "2", "4", "smiley"]));
        assert_eq!(ja.layers[2], set(&g, &["1", "2", "3", "4", "smiley"]));
        assert_eq!(ja.joker_layers[0], set(&g, &["1", "2", "smiley"]));
        assert_eq!(ja.joker_layers[1], set(&g, &["1", "2", "3", "4", "smiley"]));
        assert_eq!(ja.joker_states(), set(&g, &["1", "2", "3"]));

        let rank = |n: &str| ja.j_rank(g.state_id(n).unwrap());
        assert_eq!(rank("1"), Cost::Fin(1));
        assert_eq!(rank("2"), Cost::Fin(1));
        assert_eq!(rank("3"), Cost::Fin(2));
        assert_eq!(rank("4"), Cost::Fin(1));
        assert_eq!(rank("smiley"), Cost::ZERO);
        assert_eq!(rank("frownie"), Cost::Inf);
    }

    #[test]
    fn witnesses_justify_membership() {
        let g = fixtures::load("g_avb");
        let ja = joker_attractor(&g, g.goals());
        let id = |n: &str| g.state_id(n).unwrap();
        let a1 = |n: &str| g.act1_id(n).unwrap();
        let a2 = |n: &str| g.act2_id(n).unwrap();

        // State 3 bridges into layer 1 only through (a, y, 2).
        assert_eq!(ja.joker_witness[&id("3")], vec![(a1("a"), a2("y"), id("2"))]);
        // State 2's only Joker triple into {smiley} picks the good branch of
        // its nondeterministic (a, x) move.
        assert_eq!(ja.joker_witness[&id("2")], vec![(a1("a"), a2("x"), id("smiley"))]);
        // State 4 is forced into the first Joker layer by action a alone.
        assert_eq!(ja.inner[0].witness[&id("4")], vec![a1("a")]);
        assert!(!ja.is_joker_state(id("4")));
    }

    #[test]
    fn plain_attractor_ranks_the_cost_corridor() {
        let g = fixtures::load("g_cost");
        let att = attractor(&g, g.goals());
        let rank = |n: &str| att.rank[g.state_id(n).unwrap().0];
        assert_eq!(rank("smiley"), Cost::ZERO);
        assert_eq!(rank("6"), Cost::Fin(1));
        assert_eq!(rank("5"), Cost::Fin(2));
        for blocked in ["1", "2", "3", "4", "frownie"] {
            assert_eq!(rank(blocked), Cost::Inf, "{blocked} is not forceable");
        }
    }

    #[test]
    fn cost_corridor_joker_analysis() {
        let g = fixtures::load("g_cost");
        let ja = joker_attractor(&g, g.goals());
        assert_eq!(ja.joker_states(), set(&g, &["3", "4"]));
        for q in ["1", "2", "3", "4"] {
            assert_eq!(ja.j_rank(g.state_id(q).unwrap()), Cost::Fin(1));
        }
        // The unique route for 1 into the Joker layer is action b toward 3.
        let id = |n: &str| g.state_id(n).unwrap();
        assert_eq!(ja.inner[0].witness[&id("1")], vec![g.act1_id("b").unwrap()]);
        assert_eq!(ja.inner[0].witness[&id("2")], vec![g.act1_id("a").unwrap()]);
    }

    #[test]
    fn goalless_states_stay_outside_every_layer() {
        let g = fixtures::load("penny");
        let ja = joker_attractor(&g, g.goals());
        assert_eq!(ja.j_rank(g.state_id("1").unwrap()), Cost::Fin(1));
        assert!(ja.is_joker_state(g.state_id("1").unwrap()));
        // No force without Jokers: the base attractor is the goal alone.
        assert_eq!(ja.base.members(), &set(&g, &["smiley"]));
    }
}
