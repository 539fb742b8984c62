//! Brute-force cross-checks for the layered solvers.
//!
//! Everything in this module recomputes an answer the attractor machinery
//! already produces, but by a deliberately different route: value iteration
//! instead of layer peeling, breadth-first search instead of the distance
//! recursion, exhaustive opponent sweeps instead of witness bookkeeping.
//! Agreement is the point — these are the referees the fast code is checked
//! against, so none of them may share its shortcuts.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::attractor::{can_reach, JokerAttractor};
use crate::cost::Cost;
use crate::game::{Act1Id, Act2Id, ConcurrentGame, StateId};
use crate::joker::{outcome_summary, strategy_cost, JokerAction, JokerGame, PositionalStrategy};
use crate::sim::{simulate_run, P1Policy, P2Script, P3Script};
use crate::strategy::distances;

/// Result of running cost-game value iteration to its fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTable {
    /// Minimal worst-case Joker spend from each state; `∞` where Player 1
    /// cannot force the goal at any price.
    pub v: Vec<Cost>,
    /// Sweep at which each state's value last changed. Goals never change
    /// and sit at 0. Used as a progress measure when extracting a strategy:
    /// earlier-settled states are nearer the goal in the final propagation
    /// order.
    pub kappa: Vec<u64>,
    /// Total sweeps run, including the final one that found nothing to do.
    pub iterations: u64,
}

impl ValueTable {
    pub fn v(&self, q: StateId) -> Cost {
        self.v[q.0]
    }
}

/// Minimal Joker spend per state, by value iteration over the extended menu.
///
/// Each sweep relaxes every non-goal state against the previous sweep's
/// table: a regular action costs nothing but is charged the worst successor,
/// a Joker action costs one and lands exactly where it points. Values start
/// at `∞` (goals at 0, where they are pinned) and only ever decrease, so the
/// iteration settles; any finite spend is strictly below the state count, so
/// values past that cap are reported as `∞` outright rather than chased
/// further down.
pub fn value_iterate(game: &ConcurrentGame) -> ValueTable {
    let n = game.n_states();
    let cap = n as u64;
    let post: Vec<Vec<StateId>> = game
        .state_ids()
        .map(|q| game.post(q).into_iter().collect())
        .collect();

    let mut v = vec![Cost::Inf; n];
    for &q in game.goals() {
        v[q.0] = Cost::ZERO;
    }
    let mut kappa = vec![0u64; n];
    let mut sweep = 0u64;
    loop {
        sweep += 1;
        let mut changed = false;
        let mut next = v.clone();
        for q in game.state_ids() {
            if game.is_goal(q) {
                continue;
            }
            let regular = game
                .enabled1(q)
                .iter()
                .map(|&a| {
                    game.enabled2(q)
                        .iter()
                        .flat_map(|&x| game.moves(q, a, x).iter().map(|&t| v[t.0]))
                        .max()
                        .unwrap_or(Cost::Inf)
                })
                .min()
                .unwrap_or(Cost::Inf);
            let joker = Cost::Fin(1)
                + post[q.0]
                    .iter()
                    .map(|&t| v[t.0])
                    .min()
                    .unwrap_or(Cost::Inf);
            let mut best = regular.min(joker);
            if let Cost::Fin(m) = best {
                if m > cap {
                    best = Cost::Inf;
                }
            }
            debug_assert!(best >= Cost::ZERO && best <= v[q.0]);
            if best < v[q.0] {
                next[q.0] = best;
                kappa[q.0] = sweep;
                changed = true;
            }
        }
        v = next;
        if !changed {
            return ValueTable {
                v,
                kappa,
                iterations: sweep,
            };
        }
    }
}

/// Read a positional strategy off a finished value table.
///
/// At each state the menu is scanned for actions whose charge (action cost
/// plus worst successor value) meets the state's value; among those, the one
/// whose value-tight successors settled earliest wins, with menu order
/// breaking exact ties. The settle-time guard is what rules out stalling:
/// a zero-cost move between states of equal value must strictly descend the
/// settle order, so every play runs downhill to a goal.
pub fn extract_min_cost_strategy(game: &ConcurrentGame, vt: &ValueTable) -> PositionalStrategy {
    let jg = JokerGame::new(game);
    let mut strat = PositionalStrategy::new("min-cost");
    for q in game.state_ids() {
        let Cost::Fin(goal_v) = vt.v[q.0] else {
            continue;
        };
        if game.is_goal(q) {
            continue;
        }
        let mut best: Option<(u64, JokerAction)> = None;
        for action in jg.menu(q) {
            let succ: Vec<StateId> = match action {
                JokerAction::Regular(a) => game
                    .enabled2(q)
                    .iter()
                    .flat_map(|&x| game.moves(q, a, x).iter().copied())
                    .collect(),
                JokerAction::Joker { to, .. } => vec![to],
            };
            let cost = Cost::Fin(action.cost());
            let charge = cost
                + succ
                    .iter()
                    .map(|&t| vt.v[t.0])
                    .max()
                    .expect("enabled actions have successors");
            if charge != Cost::Fin(goal_v) {
                continue;
            }
            let settle = succ
                .iter()
                .filter(|&&t| cost + vt.v[t.0] == charge)
                .map(|&t| vt.kappa[t.0])
                .max()
                .expect("a tight successor realizes the maximum");
            if best.as_ref().map_or(true, |(s, _)| settle < *s) {
                best = Some((settle, action));
            }
        }
        let (_, action) = best.expect("the fixed point is realized by some action");
        strat.choice.insert(q, action);
    }
    strat
}

/// Every positional behavior of the opponent and the resolution, presented
/// as one indexable family.
///
/// Only genuine choice points are stored: states where Player 2 has a single
/// action and move sets with a single target contribute factor one and are
/// resolved by the scripts' own defaults.
#[derive(Debug, Clone)]
pub struct AdversaryFamily {
    p2_slots: Vec<(StateId, Vec<Act2Id>)>,
    p3_slots: Vec<((StateId, Act1Id, Act2Id), usize)>,
    count: u128,
}

impl AdversaryFamily {
    pub fn count(&self) -> u128 {
        self.count
    }

    /// Stream the pairs in mixed-radix order: pair 0 takes every first
    /// choice, the last pair every final one.
    pub fn pairs(&self) -> impl Iterator<Item = (P2Script, P3Script)> + '_ {
        (0..self.count).map(|i| self.decode(i))
    }

    fn decode(&self, mut idx: u128) -> (P2Script, P3Script) {
        let mut p2 = BTreeMap::new();
        for (q, menu) in &self.p2_slots {
            let digit = (idx % menu.len() as u128) as usize;
            idx /= menu.len() as u128;
            p2.insert(*q, menu[digit]);
        }
        let mut p3 = BTreeMap::new();
        for (slot, len) in &self.p3_slots {
            let digit = (idx % *len as u128) as usize;
            idx /= *len as u128;
            p3.insert(*slot, digit);
        }
        (P2Script::Positional(p2), P3Script::Table(p3))
    }
}

pub const DEFAULT_ADVERSARY_BOUND: u128 = 1_000_000;

/// Set up exhaustive enumeration of positional opponent/resolution pairs,
/// refusing (with the exact count) when the product exceeds `max_pairs`.
pub fn enumerate_adversaries(
    game: &ConcurrentGame,
    max_pairs: u128,
) -> Result<AdversaryFamily, String> {
    let mut p2_slots = Vec::new();
    let mut p3_slots = Vec::new();
    let mut count: u128 = 1;
    for q in game.state_ids() {
        let menu = game.enabled2(q);
        if menu.len() > 1 {
            count = count.saturating_mul(menu.len() as u128);
            p2_slots.push((q, menu.to_vec()));
        }
        for &a in game.enabled1(q) {
            for &x in game.enabled2(q) {
                let width = game.moves(q, a, x).len();
                if width > 1 {
                    count = count.saturating_mul(width as u128);
                    p3_slots.push(((q, a, x), width));
                }
            }
        }
    }
    if count > max_pairs {
        return Err(format!(
            "{count} positional adversary pairs exceed the bound of {max_pairs}"
        ));
    }
    Ok(AdversaryFamily {
        p2_slots,
        p3_slots,
        count,
    })
}

/// All positional Player 1 strategies over the extended menu, bounded the
/// same way as [`enumerate_adversaries`]. Goal states are left undefined
/// (plays stop there).
pub fn enumerate_strategies(
    game: &ConcurrentGame,
    max: u128,
) -> Result<Vec<PositionalStrategy>, String> {
    let jg = JokerGame::new(game);
    let slots: Vec<(StateId, Vec<JokerAction>)> = game
        .state_ids()
        .filter(|&q| !game.is_goal(q))
        .map(|q| (q, jg.menu(q)))
        .collect();
    let mut count: u128 = 1;
    for (_, menu) in &slots {
        count = count.saturating_mul(menu.len() as u128);
    }
    if count > max {
        return Err(format!(
            "{count} positional strategies exceed the bound of {max}"
        ));
    }
    let mut out = Vec::with_capacity(count as usize);
    for mut idx in 0..count {
        let mut strat = PositionalStrategy::new("enumerated");
        for (q, menu) in &slots {
            let digit = (idx % menu.len() as u128) as usize;
            idx /= menu.len() as u128;
            strat.choice.insert(*q, menu[digit].clone());
        }
        out.push(strat);
    }
    Ok(out)
}

/// Fewest moves to reach a goal from `start` when the opponent and the
/// resolution both cooperate, spending at most `joker_budget` Jokers.
///
/// Breadth-first search over (state, Jokers spent) pairs. Joker edges may
/// point anywhere one move can go; regular edges are confined to the layer
/// menus the distance recursion uses, so the two computations agree exactly
/// when the budget is the state's rank — which is the check this exists for.
pub fn cooperative_shortest(
    game: &ConcurrentGame,
    ja: &JokerAttractor,
    start: StateId,
    joker_budget: u64,
) -> Cost {
    let dt = distances(game, ja);
    let budget = joker_budget as usize;
    let mut seen = vec![vec![false; budget + 1]; game.n_states()];
    let mut queue = VecDeque::from([(start, 0usize, 0u64)]);
    seen[start.0][0] = true;
    while let Some((q, spent, moves)) = queue.pop_front() {
        if game.is_goal(q) {
            return Cost::Fin(moves);
        }
        let mut push = |t: StateId, s: usize, queue: &mut VecDeque<(StateId, usize, u64)>| {
            if !seen[t.0][s] {
                seen[t.0][s] = true;
                queue.push_back((t, s, moves + 1));
            }
        };
        for &a in &dt.gamma_j[q.0] {
            for &x in game.enabled2(q) {
                for &t in game.moves(q, a, x) {
                    push(t, spent, &mut queue);
                }
            }
        }
        if spent < budget {
            for &t in &dt.post[q.0] {
                push(t, spent + 1, &mut queue);
            }
        }
    }
    Cost::Inf
}

/// States violating determinacy: exactly one of "Player 1 wins the extended
/// game" and "no play at all reaches a goal" must hold everywhere, so the
/// winnable region has to coincide with cooperative reachability.
pub fn determinacy_violations(game: &ConcurrentGame, ja: &JokerAttractor) -> Vec<StateId> {
    let reach = can_reach(game, &ja.goals);
    game.state_ids()
        .filter(|&q| ja.j_rank(q).is_finite() != reach.contains(&q))
        .collect()
}

/// Per-start complaints when some outcome of `strategy` fails to spend
/// exactly the state's rank in Jokers. The attractor strategy is supposed to
/// pass this from every winnable state: never a Joker wasted, never one
/// saved.
pub fn exact_spend_violations(
    game: &ConcurrentGame,
    ja: &JokerAttractor,
    strategy: &PositionalStrategy,
) -> Vec<String> {
    let mut out = Vec::new();
    for &q in ja.members() {
        if game.is_goal(q) {
            continue;
        }
        let Cost::Fin(k) = ja.j_rank(q) else {
            continue;
        };
        let summary = outcome_summary(game, strategy, q);
        if !summary.exactly(k) {
            out.push(format!(
                "from {}: expected every outcome to win with exactly {} Jokers, \
                 got winning={} jokers={:?}..{:?}",
                game.state_name(q),
                k,
                summary.winning,
                summary.min_jokers,
                summary.max_jokers,
            ));
        }
    }
    out
}

/// How two strategies fare against a finite family of scripted opponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceReport {
    /// Indices into the opponent family that the left strategy beats.
    pub left_wins: BTreeSet<usize>,
    pub right_wins: BTreeSet<usize>,
    pub verdict: DominanceVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceVerdict {
    /// The left strategy beats strictly more of the family.
    LeftDominates,
    RightDominates,
    /// Identical win sets.
    Even,
    /// Each beats an opponent the other loses to.
    Incomparable,
}

/// Play both strategies against every opponent pair in the family and
/// compare win sets by strict inclusion. This is a finite-family probe, not
/// an admissibility decision: a verdict only speaks about the opponents
/// supplied.
pub fn dominance_compare(
    game: &ConcurrentGame,
    left: &PositionalStrategy,
    right: &PositionalStrategy,
    opponents: &[(P2Script, P3Script)],
    start: StateId,
    step_cap: usize,
) -> DominanceReport {
    let wins = |strat: &PositionalStrategy| -> BTreeSet<usize> {
        opponents
            .iter()
            .enumerate()
            .filter(|(_, (p2, p3))| {
                // Scripted opponents are deterministic; the seed is only
                // here to satisfy the harness.
                let mut rng = ChaCha8Rng::seed_from_u64(0);
                simulate_run(game, P1Policy::Strategy(strat), p2, p3, start, step_cap, &mut rng)
                    .reached(game)
            })
            .map(|(i, _)| i)
            .collect()
    };
    let left_wins = wins(left);
    let right_wins = wins(right);
    let verdict = if left_wins == right_wins {
        DominanceVerdict::Even
    } else if right_wins.is_subset(&left_wins) {
        DominanceVerdict::LeftDominates
    } else if left_wins.is_subset(&right_wins) {
        DominanceVerdict::RightDominates
    } else {
        DominanceVerdict::Incomparable
    };
    DominanceReport {
        left_wins,
        right_wins,
        verdict,
    }
}

/// Where a strategy's worst-case spend disagrees with the value table, over
/// every state from which the goal is reachable at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostMinimalReport {
    /// `(state, what the strategy spends, the value)` for each disagreement.
    pub failures: Vec<(StateId, Cost, Cost)>,
    /// No disagreements: the strategy is cost-minimal from everywhere that
    /// matters, not just from the initial state.
    pub global: bool,
}

/// Check global cost-minimality of `strategy` against a value table.
///
/// Errs if the strategy leaves any winnable non-goal state undefined — that
/// is a malformed input rather than a mere failure, and the error names the
/// state.
pub fn global_cost_minimal_check(
    game: &ConcurrentGame,
    strategy: &PositionalStrategy,
    vt: &ValueTable,
) -> Result<CostMinimalReport, String> {
    let reach = can_reach(game, game.goals());
    for &q in &reach {
        if !game.is_goal(q) && strategy.get(q).is_none() {
            return Err(format!(
                "strategy is undefined at the winnable state {}",
                game.state_name(q)
            ));
        }
    }
    let mut failures = Vec::new();
    for &q in &reach {
        if game.is_goal(q) {
            continue;
        }
        let spend = strategy_cost(game, strategy, q);
        if spend != vt.v[q.0] {
            failures.push((q, spend, vt.v[q.0]));
        }
    }
    Ok(CostMinimalReport {
        global: failures.is_empty(),
        failures,
    })
}
