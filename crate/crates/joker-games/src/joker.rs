//! The Joker extension of a game, and outcome analysis for positional
//! strategies played in it.
//!
//! Player 1's menu grows from `Γ₁(q)` to `Γ₁(q) ∪ {(a,x,q′) | q′ ∈
//! Moves(q,a,x)}`: a Joker move names her own action, the opponent action,
//! and the resolution, and the game proceeds to `q′` no matter what the
//! opponent actually plays. Regular moves cost 0, Jokers cost 1; the cost of
//! a play is the number of Jokers spent strictly before the first goal visit
//! (infinite for plays that never get there).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::cost::Cost;
use crate::game::{Act1Id, Act2Id, ConcurrentGame, Play, Resolve, StateId, StepError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum JokerAction {
    Regular(Act1Id),
    Joker { a: Act1Id, x: Act2Id, to: StateId },
}

impl JokerAction {
    pub fn is_joker(&self) -> bool {
        matches!(self, JokerAction::Joker { .. })
    }

    /// Jokers cost 1, regular moves cost 0.
    pub fn cost(&self) -> u64 {
        self.is_joker() as u64
    }

    /// The Player 1 action this move exposes: Jokers project to their own
    /// action component.
    pub fn inspired(&self) -> Act1Id {
        match *self {
            JokerAction::Regular(a) => a,
            JokerAction::Joker { a, .. } => a,
        }
    }
}

/// A read-only Joker view of a game; the extended menus are derived lazily.
#[derive(Debug, Clone, Copy)]
pub struct JokerGame<'g> {
    game: &'g ConcurrentGame,
}

impl<'g> JokerGame<'g> {
    pub fn new(game: &'g ConcurrentGame) -> Self {
        JokerGame { game }
    }

    pub fn game(&self) -> &'g ConcurrentGame {
        self.game
    }

    /// All Joker moves available in `q`, in lexicographic `(a, x, q′)` order.
    pub fn joker_moves(&self, q: StateId) -> Vec<JokerAction> {
        let g = self.game;
        let mut out = Vec::new();
        for &a in g.enabled1(q) {
            for &x in g.enabled2(q) {
                for &to in g.moves(q, a, x) {
                    out.push(JokerAction::Joker { a, x, to });
                }
            }
        }
        out
    }

    /// The full Player 1 menu in `q`: regular actions first, then Jokers.
    pub fn menu(&self, q: StateId) -> Vec<JokerAction> {
        let mut out: Vec<JokerAction> = self
            .game
            .enabled1(q)
            .iter()
            .map(|&a| JokerAction::Regular(a))
            .collect();
        out.extend(self.joker_moves(q));
        out
    }

    pub fn is_enabled(&self, q: StateId, action: &JokerAction) -> bool {
        let g = self.game;
        match *action {
            JokerAction::Regular(a) => g.enabled1(q).contains(&a),
            JokerAction::Joker { a, x, to } => {
                g.enabled1(q).contains(&a)
                    && g.enabled2(q).contains(&x)
                    && g.moves(q, a, x).contains(&to)
            }
        }
    }

    /// One step of the Joker game. A Joker move overrides both the opponent
    /// action and the resolution; a regular move plays out as in the base
    /// game.
    pub fn step(
        &self,
        q: StateId,
        action: &JokerAction,
        x: Act2Id,
        resolve: Resolve,
    ) -> Result<StateId, StepError> {
        match *action {
            JokerAction::Regular(a) => self.game.step(q, a, x, resolve),
            JokerAction::Joker { a, x: jx, to } => {
                if !self.is_enabled(q, action) {
                    return Err(StepError::Disabled1 {
                        state: self.game.state_name(q).into(),
                        action: format!(
                            "Joker({}, {}, {})",
                            self.game.act1_name(a),
                            self.game.act2_name(jx),
                            self.game.state_name(to)
                        ),
                    });
                }
                Ok(to)
            }
        }
    }
}

/// Number of Jokers spent before the first goal visit; infinite for plays
/// that never reach a goal.
pub fn play_cost(play: &Play<JokerAction>, goals: &BTreeSet<StateId>) -> Cost {
    match play.win_index(goals) {
        Cost::Fin(j) => Cost::Fin(
            play.actions[..j as usize]
                .iter()
                .filter(|(a, _)| a.is_joker())
                .count() as u64,
        ),
        Cost::Inf => Cost::Inf,
    }
}

/// A positional Player 1 strategy in the Joker game.
///
/// `choice` may be partial: goal states need no entry, and states the
/// strategy cannot reach are often left out. Reaching an uncovered non-goal
/// state during analysis counts as losing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionalStrategy {
    pub choice: BTreeMap<StateId, JokerAction>,
    /// Human-readable tag carried into reports (e.g. "attractor", "short").
    pub label: String,
}

impl PositionalStrategy {
    pub fn new(label: impl Into<String>) -> Self {
        PositionalStrategy {
            choice: BTreeMap::new(),
            label: label.into(),
        }
    }

    pub fn get(&self, q: StateId) -> Option<&JokerAction> {
        self.choice.get(&q)
    }

    /// Project every Joker move to its Player 1 action, yielding a strategy
    /// of the base game. Idempotent.
    pub fn inspired(&self) -> PositionalStrategy {
        PositionalStrategy {
            choice: self
                .choice
                .iter()
                .map(|(&q, act)| (q, JokerAction::Regular(act.inspired())))
                .collect(),
            label: if self.label.ends_with("-inspired") {
                self.label.clone()
            } else {
                format!("{}-inspired", self.label)
            },
        }
    }
}

/// Exhaustive analysis of every play a positional strategy can produce
/// against arbitrary (even history-dependent) opponents and resolutions.
///
/// The plays from `start` form a graph: at each non-goal state the strategy
/// fixes Player 1's move, and the opponent/resolution choose among the
/// resulting successors. Goal states are absorbing for cost purposes, so the
/// graph is pruned there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeSummary {
    pub start: StateId,
    /// Every outcome reaches a goal (no reachable non-goal cycle, no hole in
    /// the strategy). Equivalent to the strategy being surely winning.
    pub winning: bool,
    /// A reachable non-goal state with no strategy entry, if any.
    pub undefined_at: Option<StateId>,
    /// Fewest Jokers over all winning outcomes (best case).
    pub min_jokers: Option<u64>,
    /// Most Jokers over all outcomes, when `winning` (sup over outcomes).
    pub max_jokers: Option<u64>,
    /// Length of the shortest winning outcome (cooperative best case).
    pub min_moves: Option<u64>,
    /// Length of the longest outcome, when `winning`.
    pub max_moves: Option<u64>,
    /// Jokers spent on one shortest winning outcome (ties broken toward
    /// fewer Jokers).
    pub min_moves_jokers: Option<u64>,
}

impl OutcomeSummary {
    /// Worst-case cost of the strategy from `start`: the supremum of play
    /// costs over all outcomes.
    pub fn cost(&self) -> Cost {
        if self.winning {
            Cost::Fin(self.max_jokers.expect("winning summaries have a maximum"))
        } else {
            Cost::Inf
        }
    }

    /// True when every outcome wins spending exactly `k` Jokers.
    pub fn exactly(&self, k: u64) -> bool {
        self.winning && self.min_jokers == Some(k) && self.max_jokers == Some(k)
    }
}

pub fn outcome_summary(
    game: &ConcurrentGame,
    strategy: &PositionalStrategy,
    start: StateId,
) -> OutcomeSummary {
    // Reachable subgraph under the strategy, pruned at goals.
    let mut succ: BTreeMap<StateId, (u64, Vec<StateId>)> = BTreeMap::new();
    let mut undefined_at = None;
    let mut queue = VecDeque::from([start]);
    let mut seen = BTreeSet::from([start]);
    while let Some(q) = queue.pop_front() {
        if game.is_goal(q) {
            continue;
        }
        let targets: Option<(u64, BTreeSet<StateId>)> = match strategy.get(q) {
            Some(&JokerAction::Regular(a)) if game.enabled1(q).contains(&a) => Some((
                0,
                game.enabled2(q)
                    .iter()
                    .flat_map(|&x| game.moves(q, a, x))
                    .copied()
                    .collect(),
            )),
            Some(&act @ JokerAction::Joker { to, .. })
                if JokerGame::new(game).is_enabled(q, &act) =>
            {
                Some((1, BTreeSet::from([to])))
            }
            _ => None,
        };
        match targets {
            None => {
                undefined_at.get_or_insert(q);
            }
            Some((jokers, set)) => {
                for &t in &set {
                    if seen.insert(t) {
                        queue.push_back(t);
                    }
                }
                succ.insert(q, (jokers, set.into_iter().collect()));
            }
        }
    }

    // Cycle check among non-goal nodes (iterative DFS with colors).
    let mut color: BTreeMap<StateId, u8> = BTreeMap::new(); // 1 = open, 2 = done
    let mut cyclic = false;
    let mut stack: Vec<(StateId, usize)> = Vec::new();
    for &root in succ.keys() {
        if color.contains_key(&root) {
            continue;
        }
        stack.push((root, 0));
        color.insert(root, 1);
        while let Some(&mut (q, ref mut i)) = stack.last_mut() {
            let kids = succ.get(&q).map(|(_, k)| k.as_slice()).unwrap_or(&[]);
            if *i < kids.len() {
                let t = kids[*i];
                *i += 1;
                match color.get(&t) {
                    Some(1) => cyclic = true,
                    Some(_) => {}
                    None => {
                        color.insert(t, 1);
                        stack.push((t, 0));
                    }
                }
            } else {
                color.insert(q, 2);
                stack.pop();
            }
        }
    }

    let winning = !cyclic && undefined_at.is_none();

    // Best cases, valid even with cycles: Dijkstra over (moves, jokers) in
    // lexicographic order finds the shortest winning outcome and the Jokers
    // it spends; a 0/1-weight pass finds the fewest Jokers needed to win.
    let edge = |q: StateId| succ.get(&q);
    let min_moves_pair = {
        let mut best: BTreeMap<StateId, (u64, u64)> = BTreeMap::new();
        let mut heap = std::collections::BinaryHeap::new();
        heap.push(std::cmp::Reverse(((0u64, 0u64), start)));
        let mut found: Option<(u64, u64)> = None;
        while let Some(std::cmp::Reverse((d, q))) = heap.pop() {
            if best.get(&q).is_some_and(|&b| b <= d) {
                continue;
            }
            best.insert(q, d);
            if game.is_goal(q) {
                found = Some(d);
                break;
            }
            if let Some((jokers, kids)) = edge(q) {
                for &t in kids {
                    heap.push(std::cmp::Reverse(((d.0 + 1, d.1 + jokers), t)));
                }
            }
        }
        found
    };
    let min_jokers = {
        let mut best: BTreeMap<StateId, u64> = BTreeMap::new();
        let mut dq: VecDeque<(u64, StateId)> = VecDeque::from([(0, start)]);
        let mut found = None;
        while let Some((d, q)) = dq.pop_front() {
            if best.get(&q).is_some_and(|&b| b <= d) {
                continue;
            }
            best.insert(q, d);
            if game.is_goal(q) {
                found = Some(found.map_or(d, |f: u64| f.min(d)));
                continue;
            }
            if let Some((jokers, kids)) = edge(q) {
                for &t in kids {
                    if *jokers == 0 {
                        dq.push_front((d, t));
                    } else {
                        dq.push_back((d + 1, t));
                    }
                }
            }
        }
        found
    };

    // Worst cases require a DAG; longest path / most Jokers by memoized DFS
    // in reverse topological order.
    let (max_jokers, max_moves) = if winning {
        let mut order: Vec<StateId> = Vec::new();
        let mut mark: BTreeSet<StateId> = BTreeSet::new();
        // succ is a DAG here; build topological order by repeated scans.
        let mut pending: Vec<StateId> = succ.keys().copied().collect();
        while !pending.is_empty() {
            let before = pending.len();
            pending.retain(|&q| {
                let ready = succ[&q]
                    .1
                    .iter()
                    .all(|t| game.is_goal(*t) || mark.contains(t));
                if ready {
                    mark.insert(q);
                    order.push(q);
                }
                !ready
            });
            assert_ne!(before, pending.len(), "cycle in a graph declared acyclic");
        }
        let mut mj: BTreeMap<StateId, u64> = BTreeMap::new();
        let mut mm: BTreeMap<StateId, u64> = BTreeMap::new();
        for &q in &order {
            let (jokers, kids) = &succ[&q];
            let val = |m: &BTreeMap<StateId, u64>, t: StateId| m.get(&t).copied().unwrap_or(0);
            mj.insert(q, jokers + kids.iter().map(|&t| val(&mj, t)).max().unwrap());
            mm.insert(q, 1 + kids.iter().map(|&t| val(&mm, t)).max().unwrap());
        }
        (
            Some(mj.get(&start).copied().unwrap_or(0)),
            Some(mm.get(&start).copied().unwrap_or(0)),
        )
    } else {
        (None, None)
    };

    OutcomeSummary {
        start,
        winning,
        undefined_at,
        min_jokers,
        max_jokers,
        min_moves: min_moves_pair.map(|(m, _)| m),
        max_moves,
        min_moves_jokers: min_moves_pair.map(|(_, j)| j),
    }
}

/// Worst-case cost of `strategy` from `start`: the supremum of play costs
/// over all outcomes.
pub fn strategy_cost(
    game: &ConcurrentGame,
    strategy: &PositionalStrategy,
    start: StateId,
) -> Cost {
    outcome_summary(game, strategy, start).cost()
}
