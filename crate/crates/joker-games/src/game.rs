//! Two-player concurrent game arenas with nondeterministic outcomes.
//!
//! A game has a finite state set, per-state nonempty action menus for both
//! players, and a move relation `moves(q, a, x)` giving the possible
//! successors when Player 1 picks `a` and Player 2 simultaneously picks `x`.
//! The move set is nonempty exactly when both actions are enabled; which
//! successor is taken is resolved by a third, adversarial source of
//! nondeterminism. A play is winning when it visits a goal state.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cost::Cost;

/// Index of a state in the stable (declaration) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StateId(pub usize);

/// Index of a Player-1 action in the stable order of the `act1` alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Act1Id(pub usize);

/// Index of a Player-2 action in the stable order of the `act2` alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Act2Id(pub usize);

/// A structural defect found while checking a game description.
///
/// Validation reports all defects instead of stopping at the first, so a bad
/// file can be fixed in one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoStates,
    DuplicateState(String),
    DuplicateAction(String),
    UnknownState { context: String, name: String },
    UnknownAction { context: String, name: String },
    EmptyMenu { state: String, player: u8 },
    EnabledPairWithoutMoves { state: String, a1: String, a2: String },
    MovesOnDisabledPair { state: String, a1: String, a2: String },
    DuplicateMoveEntry { state: String, a1: String, a2: String },
    EmptyMoveTargets { state: String, a1: String, a2: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoStates => write!(f, "game has no states"),
            Violation::DuplicateState(s) => write!(f, "state {s:?} declared twice"),
            Violation::DuplicateAction(a) => write!(f, "action {a:?} declared twice"),
            Violation::UnknownState { context, name } => {
                write!(f, "{context} refers to unknown state {name:?}")
            }
            Violation::UnknownAction { context, name } => {
                write!(f, "{context} refers to unknown action {name:?}")
            }
            Violation::EmptyMenu { state, player } => {
                write!(f, "state {state:?} enables no Player-{player} action")
            }
            Violation::EnabledPairWithoutMoves { state, a1, a2 } => {
                write!(f, "enabled pair ({state}, {a1}, {a2}) has no moves")
            }
            Violation::MovesOnDisabledPair { state, a1, a2 } => {
                write!(f, "moves listed for disabled pair ({state}, {a1}, {a2})")
            }
            Violation::DuplicateMoveEntry { state, a1, a2 } => {
                write!(f, "duplicate move entry for ({state}, {a1}, {a2})")
            }
            Violation::EmptyMoveTargets { state, a1, a2 } => {
                write!(f, "move entry for ({state}, {a1}, {a2}) has an empty target list")
            }
        }
    }
}

/// How to pick one successor out of a nondeterministic move set.
pub enum Resolve<'a> {
    /// Deterministic: the first target in stable state order.
    First,
    /// Explicit branch index into the (stably ordered) target list.
    Index(usize),
    /// Uniformly random.
    Rng(&'a mut dyn rand::RngCore),
}

/// Errors raised when driving a game step by step.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum StepError {
    #[error("Player-1 action {action:?} is not enabled in state {state:?}")]
    Disabled1 { state: String, action: String },
    #[error("Player-2 action {action:?} is not enabled in state {state:?}")]
    Disabled2 { state: String, action: String },
    #[error("branch index {index} out of range for a move set of size {len}")]
    BadBranch { index: usize, len: usize },
}

/// A finite concurrent game arena with a goal set.
///
/// States and actions are referred to by dense indices internally; the
/// original names are kept so every table and report can be printed in the
/// stable declaration order of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcurrentGame {
    states: Vec<String>,
    state_ids: HashMap<String, StateId>,
    initial: StateId,
    act1: Vec<String>,
    act2: Vec<String>,
    enabled1: Vec<Vec<Act1Id>>,
    enabled2: Vec<Vec<Act2Id>>,
    /// Dense move table, indexed `q * |act1| * |act2| + a * |act2| + x`.
    /// Targets are sorted by state index; an empty list means "disabled pair".
    moves: Vec<Vec<StateId>>,
    goals: BTreeSet<StateId>,
}

impl ConcurrentGame {
    pub(crate) fn from_parts(
        states: Vec<String>,
        initial: StateId,
        act1: Vec<String>,
        act2: Vec<String>,
        enabled1: Vec<Vec<Act1Id>>,
        enabled2: Vec<Vec<Act2Id>>,
        moves: Vec<Vec<StateId>>,
        goals: BTreeSet<StateId>,
    ) -> ConcurrentGame {
        let state_ids = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), StateId(i)))
            .collect();
        ConcurrentGame {
            states,
            state_ids,
            initial,
            act1,
            act2,
            enabled1,
            enabled2,
            moves,
            goals,
        }
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_ids.get(name).copied()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn act1_names(&self) -> &[String] {
        &self.act1
    }

    pub fn act2_names(&self) -> &[String] {
        &self.act2
    }

    pub fn act1_name(&self, a: Act1Id) -> &str {
        &self.act1[a.0]
    }

    pub fn act2_name(&self, x: Act2Id) -> &str {
        &self.act2[x.0]
    }

    pub fn act1_id(&self, name: &str) -> Option<Act1Id> {
        self.act1.iter().position(|a| a == name).map(Act1Id)
    }

    pub fn act2_id(&self, name: &str) -> Option<Act2Id> {
        self.act2.iter().position(|x| x == name).map(Act2Id)
    }

    /// Player-1 actions enabled in `q`, in stable order. Never empty.
    pub fn enabled1(&self, q: StateId) -> &[Act1Id] {
        &self.enabled1[q.0]
    }

    /// Player-2 actions enabled in `q`, in stable order. Never empty.
    pub fn enabled2(&self, q: StateId) -> &[Act2Id] {
        &self.enabled2[q.0]
    }

    fn slot(&self, q: StateId, a: Act1Id, x: Act2Id) -> usize {
        (q.0 * self.act1.len() + a.0) * self.act2.len() + x.0
    }

    /// Possible successors for the action pair `(a, x)` in `q`, sorted by
    /// state index. Empty exactly when the pair is not jointly enabled.
    pub fn moves(&self, q: StateId, a: Act1Id, x: Act2Id) -> &[StateId] {
        &self.moves[self.slot(q, a, x)]
    }

    pub fn goals(&self) -> &BTreeSet<StateId> {
        &self.goals
    }

    pub fn is_goal(&self, q: StateId) -> bool {
        self.goals.contains(&q)
    }

    /// Replace the goal set (e.g. to solve the same arena for another target).
    pub fn with_goals(&self, goals: BTreeSet<StateId>) -> ConcurrentGame {
        let mut g = self.clone();
        g.goals = goals;
        g
    }

    /// All one-step successors of `q`, over every enabled pair and branch.
    pub fn post(&self, q: StateId) -> BTreeSet<StateId> {
        let mut out = BTreeSet::new();
        for &a in self.enabled1(q) {
            for &x in self.enabled2(q) {
                out.extend(self.moves(q, a, x).iter().copied());
            }
        }
        out
    }

    /// Execute one joint step, resolving nondeterminism with `resolve`.
    pub fn step(
        &self,
        q: StateId,
        a: Act1Id,
        x: Act2Id,
        resolve: Resolve,
    ) -> Result<StateId, StepError> {
        if !self.enabled1(q).contains(&a) {
            return Err(StepError::Disabled1 {
                state: self.state_name(q).into(),
                action: self.act1_name(a).into(),
            });
        }
        if !self.enabled2(q).contains(&x) {
            return Err(StepError::Disabled2 {
                state: self.state_name(q).into(),
                action: self.act2_name(x).into(),
            });
        }
        let options = self.moves(q, a, x);
        debug_assert!(!options.is_empty(), "valid games have no empty enabled pairs");
        let idx = match resolve {
            Resolve::First => 0,
            Resolve::Index(i) => {
                if i >= options.len() {
                    return Err(StepError::BadBranch {
                        index: i,
                        len: options.len(),
                    });
                }
                i
            }
            Resolve::Rng(rng) => rng.gen_range(0..options.len()),
        };
        Ok(options[idx])
    }

    /// Re-check the arena invariants on the compiled form. Compilation
    /// already enforces them, so this is mainly exercised by generators and
    /// property tests.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for q in self.state_ids() {
            if self.enabled1(q).is_empty() {
                out.push(Violation::EmptyMenu {
                    state: self.state_name(q).into(),
                    player: 1,
                });
            }
            if self.enabled2(q).is_empty() {
                out.push(Violation::EmptyMenu {
                    state: self.state_name(q).into(),
                    player: 2,
                });
            }
            for a in (0..self.act1.len()).map(Act1Id) {
                for x in (0..self.act2.len()).map(Act2Id) {
                    let enabled =
                        self.enabled1(q).contains(&a) && self.enabled2(q).contains(&x);
                    let has_moves = !self.moves(q, a, x).is_empty();
                    if enabled && !has_moves {
                        out.push(Violation::EnabledPairWithoutMoves {
                            state: self.state_name(q).into(),
                            a1: self.act1_name(a).into(),
                            a2: self.act2_name(x).into(),
                        });
                    }
                    if !enabled && has_moves {
                        out.push(Violation::MovesOnDisabledPair {
                            state: self.state_name(q).into(),
                            a1: self.act1_name(a).into(),
                            a2: self.act2_name(x).into(),
                        });
                    }
                }
            }
        }
        out
    }
}

/// A finite play prefix: the visited states plus the action pair taken at
/// each step. `A` is the Player-1 action type — plain actions in the base
/// game, possibly Joker actions in the Joker game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Play<A> {
    /// Visited states; `states[0]` is the start, `states.len() == steps + 1`.
    pub states: Vec<StateId>,
    /// The `(Player-1, Player-2)` action pair of each step.
    pub actions: Vec<(A, Act2Id)>,
    /// True when the play was stopped by a step cap rather than by choice;
    /// callers must not read a cutoff play as evidence about the full play.
    pub cutoff: bool,
}

impl<A> Play<A> {
    pub fn new(start: StateId) -> Play<A> {
        Play {
            states: vec![start],
            actions: Vec::new(),
            cutoff: false,
        }
    }

    pub fn push(&mut self, a: A, x: Act2Id, next: StateId) {
        self.actions.push((a, x));
        self.states.push(next);
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn current(&self) -> StateId {
        *self.states.last().expect("plays always hold the start state")
    }

    /// Index of the first visit to a goal state (`Fin(0)` when the play
    /// starts on a goal), or `Inf` when the prefix never touches one.
    pub fn win_index(&self, goals: &BTreeSet<StateId>) -> Cost {
        self.states
            .iter()
            .position(|q| goals.contains(q))
            .map(|j| Cost::Fin(j as u64))
            .unwrap_or(Cost::Inf)
    }
}
