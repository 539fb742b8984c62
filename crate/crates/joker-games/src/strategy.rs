//! Turning attractor tables into playable positional strategies.
//!
//! Two constructions live here. The *attractor strategy* follows witnesses
//! layer by layer and is worst-case optimal: every outcome wins using exactly
//! the state's Joker rank, no matter what the opponent does. The *short*
//! strategy additionally minimizes moves under best-case cooperation, guided
//! by a distance table; it still never spends more than the minimal number of
//! Jokers, but trades worst-case move guarantees for a fast route.

use crate::attractor::JokerAttractor;
use crate::cost::Cost;
use crate::game::{Act1Id, ConcurrentGame, StateId};
use crate::joker::{JokerAction, PositionalStrategy};

/// The canonical witness-following strategy: Joker states bridge to the
/// previous layer, everything else follows its attractor's forcing action.
/// Ties resolve to the first witness in the stable order. Defined exactly on
/// the winnable non-goal states.
pub fn joker_attractor_strategy(ja: &JokerAttractor) -> PositionalStrategy {
    let mut strat = PositionalStrategy::new("attractor");
    for &q in ja.members() {
        if ja.goals.contains(&q) {
            continue;
        }
        let action = if ja.is_joker_state(q) {
            let &(a, x, to) = ja.joker_witness[&q]
                .first()
                .expect("joker state without a bridging triple");
            JokerAction::Joker { a, x, to }
        } else if ja.a_rank(q).is_finite() {
            JokerAction::Regular(
                ja.base
                    .canonical_witness(q)
                    .expect("non-goal attractor state without a forcing action"),
            )
        } else {
            let Cost::Fin(k) = ja.j_rank(q) else {
                unreachable!("member with infinite rank")
            };
            JokerAction::Regular(
                ja.inner[k as usize - 1]
                    .canonical_witness(q)
                    .expect("layered state without an inner forcing action"),
            )
        };
        strat.choice.insert(q, action);
    }
    strat
}

/// Check a strategy against the witness discipline the attractor recipe
/// demands, state by state. Returns a description of every violation:
/// a choice outside the witness set, a hole inside the winnable region, or a
/// choice where none is allowed (goals, unwinnable states). Empty means the
/// strategy is interchangeable with a canonical one.
pub fn attractor_strategy_violations(
    game: &ConcurrentGame,
    ja: &JokerAttractor,
    strat: &PositionalStrategy,
) -> Vec<String> {
    let mut out = Vec::new();
    for q in game.state_ids() {
        let name = game.state_name(q);
        let choice = strat.get(q);
        if !ja.contains(q) || ja.goals.contains(&q) {
            if choice.is_some() {
                out.push(format!("{name}: choice outside the strategy's domain"));
            }
            continue;
        }
        let Some(choice) = choice else {
            out.push(format!("{name}: no choice at a winnable state"));
            continue;
        };
        if ja.is_joker_state(q) {
            let ok = matches!(
                choice,
                JokerAction::Joker { a, x, to } if ja.joker_witness[&q].contains(&(*a, *x, *to))
            );
            if !ok {
                out.push(format!("{name}: not a bridging Joker triple"));
            }
        } else {
            let witnesses = if ja.a_rank(q).is_finite() {
                ja.base.witness.get(&q)
            } else {
                let Cost::Fin(k) = ja.j_rank(q) else {
                    unreachable!("member with infinite rank")
                };
                ja.inner[k as usize - 1].witness.get(&q)
            };
            let ok = matches!(
                choice,
                JokerAction::Regular(a) if witnesses.is_some_and(|w| w.contains(a))
            );
            if !ok {
                out.push(format!("{name}: not a forcing action of its layer"));
            }
        }
    }
    out
}

/// How Player 2 and the nondeterminism are assumed to resolve a regular move
/// when measuring route lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cooperation {
    /// They help: a move costs the best successor's distance. This is the
    /// reading under which the short strategy's move count is guaranteed.
    Best,
    /// They resist: a move costs the worst successor's distance. Useful as a
    /// diagnostic; no optimality claims attach to it.
    Worst,
}

/// Per-state distance analysis over a Joker attractor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    /// Moves needed to win from each state (Jokers included as moves),
    /// assuming minimal Joker usage; `∞` outside the winnable region.
    pub d: Vec<Cost>,
    /// Restricted menus: the regular actions guaranteed not to regress.
    /// Rank-0 states keep actions confined to the no-Joker region; a
    /// non-Joker state of rank k keeps actions confined to its own layer
    /// difference. Empty at Joker states and outside the winnable region.
    pub gamma_j: Vec<Vec<Act1Id>>,
    /// All one-move successors, regardless of ranks.
    pub post: Vec<Vec<StateId>>,
    /// For non-Joker members of rank ≥ 1: the rank whose layer difference
    /// confines `gamma_j`. (The confinement set is unambiguous: such a state
    /// always has a move into its own layer, and never one below it.)
    pub non_joker_layer_index: Vec<Option<u64>>,
}

impl DistanceTable {
    pub fn d(&self, q: StateId) -> Cost {
        self.d[q.0]
    }
}

/// Fixed point of the layered distance recursion under the given cooperation
/// assumption: goals are 0, a Joker state is one more than the best target in
/// the previous layer, and other members relax over their restricted menus.
pub fn distances_with(
    game: &ConcurrentGame,
    ja: &JokerAttractor,
    coop: Cooperation,
) -> DistanceTable {
    let n = game.n_states();
    let post: Vec<Vec<StateId>> = game
        .state_ids()
        .map(|q| {
            let mut ts: Vec<StateId> = game
                .enabled1(q)
                .iter()
                .flat_map(|&a| {
                    game.enabled2(q)
                        .iter()
                        .flat_map(move |&x| game.moves(q, a, x).iter().copied())
                })
                .collect();
            ts.sort_unstable();
            ts.dedup();
            ts
        })
        .collect();

    let mut gamma_j = vec![Vec::new(); n];
    let mut non_joker_layer_index = vec![None; n];
    for &q in ja.members() {
        if ja.is_joker_state(q) {
            continue;
        }
        let confined_to: Box<dyn Fn(StateId) -> bool> = if ja.a_rank(q).is_finite() {
            Box::new(|t| ja.base.contains(t))
        } else {
            let Cost::Fin(k) = ja.j_rank(q) else {
                unreachable!("member with infinite rank")
            };
            non_joker_layer_index[q.0] = Some(k);
            let (above, below) = (&ja.layers[k as usize], &ja.layers[k as usize - 1]);
            Box::new(move |t| above.contains(&t) && !below.contains(&t))
        };
        gamma_j[q.0] = game
            .enabled1(q)
            .iter()
            .copied()
            .filter(|&a| {
                game.enabled2(q)
                    .iter()
                    .all(|&x| game.moves(q, a, x).iter().all(|&t| confined_to(t)))
            })
            .collect();
    }

    let mut d = vec![Cost::Inf; n];
    for &q in &ja.goals {
        d[q.0] = Cost::ZERO;
    }
    loop {
        let mut changed = false;
        for &q in ja.members() {
            if ja.goals.contains(&q) {
                continue;
            }
            let candidate = if ja.is_joker_state(q) {
                // The Joker hand-picks the resolution, so cooperation is moot.
                ja.joker_witness[&q]
                    .iter()
                    .map(|&(_, _, to)| d[to.0])
                    .min()
                    .unwrap_or(Cost::Inf)
            } else {
                gamma_j[q.0]
                    .iter()
                    .map(|&a| {
                        let per_action = game.enabled2(q).iter().flat_map(|&x| {
                            game.moves(q, a, x).iter().map(|&t| d[t.0])
                        });
                        match coop {
                            Cooperation::Best => per_action.min(),
                            Cooperation::Worst => per_action.max(),
                        }
                        .unwrap_or(Cost::Inf)
                    })
                    .min()
                    .unwrap_or(Cost::Inf)
            };
            let candidate = Cost::Fin(1) + candidate;
            if candidate < d[q.0] {
                d[q.0] = candidate;
                changed = true;
            }
        }
        if !changed {
            return DistanceTable {
                d,
                gamma_j,
                post,
                non_joker_layer_index,
            };
        }
    }
}

/// The distance table under cooperative resolution — the one the short
/// strategy is built from.
pub fn distances(game: &ConcurrentGame, ja: &JokerAttractor) -> DistanceTable {
    distances_with(game, ja, Cooperation::Best)
}

/// The move-minimizing strategy: at Joker states, bridge to a
/// distance-minimal target in the previous layer; elsewhere follow the
/// restricted-menu action with the best cooperative successor. Ties resolve
/// lexicographically. Spends exactly the minimal number of Jokers on every
/// winning outcome, and some cooperative outcome wins in `d(start)` moves.
///
/// Restricting Joker bridges to the previous layer is what protects the
/// Joker budget: a shortcut through a *same-rank* state can look closer in
/// moves but forces a second Joker later, and this construction never takes
/// it.
pub fn short_joker_strategy(game: &ConcurrentGame, ja: &JokerAttractor) -> PositionalStrategy {
    let dt = distances(game, ja);
    let mut strat = PositionalStrategy::new("short");
    for &q in ja.members() {
        if ja.goals.contains(&q) {
            continue;
        }
        let action = if ja.is_joker_state(q) {
            let triples = &ja.joker_witness[&q];
            let best = triples
                .iter()
                .map(|&(_, _, to)| dt.d[to.0])
                .min()
                .expect("joker state without a bridging triple");
            let &(a, x, to) = triples
                .iter()
                .find(|&&(_, _, to)| dt.d[to.0] == best)
                .unwrap();
            JokerAction::Joker { a, x, to }
        } else {
            let menu = &dt.gamma_j[q.0];
            assert!(
                !menu.is_empty(),
                "confined menu empty at winnable state {}",
                game.state_name(q)
            );
            let score = |a: Act1Id| {
                game.enabled2(q)
                    .iter()
                    .flat_map(|&x| game.moves(q, a, x).iter().map(|&t| dt.d[t.0]))
                    .min()
                    .unwrap_or(Cost::Inf)
            };
            let best = menu.iter().map(|&a| score(a)).min().unwrap();
            JokerAction::Regular(*menu.iter().find(|&&a| score(a) == best).unwrap())
        };
        strat.choice.insert(q, action);
    }
    strat
}
