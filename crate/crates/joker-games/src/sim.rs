//! Seeded play harness: drive a game with a Player 1 policy against scripted
//! or randomized opponents, one step at a time, up to a cap.
//!
//! Everything here is deterministic given the RNG, so simulations are
//! reproducible from a seed. Scripts *clamp*: when a script asks for an
//! action that is not enabled in the current state, the first enabled action
//! is played instead. That keeps scripts total without forcing every script
//! author to reason about every state's menu.

use std::collections::BTreeMap;

use rand::Rng;
use rand::RngCore;

use crate::game::{Act1Id, Act2Id, ConcurrentGame, Play, Resolve, StateId};
use crate::joker::{JokerAction, JokerGame, PositionalStrategy};

/// Player 2 behaviors for simulation.
#[derive(Debug, Clone)]
pub enum P2Script {
    /// Always the first enabled action.
    First,
    /// Uniformly random among enabled actions.
    Uniform,
    /// A fixed action per state.
    Positional(BTreeMap<StateId, Act2Id>),
    /// React to Player 1's previous action; `default` before the first move
    /// and for unlisted actions.
    LastAction {
        rules: BTreeMap<Act1Id, Act2Id>,
        default: Act2Id,
    },
    /// One action on the opening move, another ever after.
    Phased { first: Act2Id, rest: Act2Id },
}

impl P2Script {
    pub fn respond(
        &self,
        game: &ConcurrentGame,
        q: StateId,
        step_index: usize,
        last1: Option<Act1Id>,
        rng: &mut dyn RngCore,
    ) -> Act2Id {
        let menu = game.enabled2(q);
        let wish = match self {
            P2Script::First => return menu[0],
            P2Script::Uniform => return menu[rng.gen_range(0..menu.len())],
            P2Script::Positional(table) => table.get(&q).copied(),
            P2Script::LastAction { rules, default } => Some(
                last1
                    .and_then(|a| rules.get(&a).copied())
                    .unwrap_or(*default),
            ),
            P2Script::Phased { first, rest } => {
                Some(if step_index == 0 { *first } else { *rest })
            }
        };
        match wish {
            Some(x) if menu.contains(&x) => x,
            _ => menu[0],
        }
    }
}

/// How nondeterministic move sets resolve during simulation.
#[derive(Debug, Clone)]
pub enum P3Script {
    First,
    /// A fixed branch index, clamped to each move set's length.
    Index(usize),
    /// A branch index per (state, action, action) slot; missing entries
    /// resolve to the first target. Indices are clamped like [`P3Script::Index`].
    Table(BTreeMap<(StateId, Act1Id, Act2Id), usize>),
    Uniform,
}

/// Player 1 behaviors for simulation.
#[derive(Debug, Clone, Copy)]
pub enum P1Policy<'a> {
    /// Follow a positional strategy; reaching a state it leaves undefined
    /// strands the run.
    Strategy(&'a PositionalStrategy),
    /// Randomize uniformly over a per-state set of regular actions (the
    /// shape almost-sure winning takes). Disabled entries are dropped;
    /// an empty or missing entry strands the run.
    Support(&'a BTreeMap<StateId, Vec<Act1Id>>),
    /// Uniformly random among enabled regular actions.
    Uniform,
    /// A randomized strategy with deterministic exceptions: states in
    /// `jokers` play their fixed action outright, everything else randomizes
    /// uniformly over its `support` entry (same stranding rules as
    /// [`P1Policy::Support`]).
    Mixed {
        jokers: &'a BTreeMap<StateId, JokerAction>,
        support: &'a BTreeMap<StateId, Vec<Act1Id>>,
    },
}

impl P1Policy<'_> {
    fn choose(
        &self,
        game: &ConcurrentGame,
        q: StateId,
        rng: &mut dyn RngCore,
    ) -> Option<JokerAction> {
        fn from_support(
            game: &ConcurrentGame,
            q: StateId,
            table: &BTreeMap<StateId, Vec<Act1Id>>,
            rng: &mut dyn RngCore,
        ) -> Option<JokerAction> {
            let pool: Vec<Act1Id> = table
                .get(&q)?
                .iter()
                .copied()
                .filter(|a| game.enabled1(q).contains(a))
                .collect();
            if pool.is_empty() {
                return None;
            }
            Some(JokerAction::Regular(pool[rng.gen_range(0..pool.len())]))
        }
        match self {
            P1Policy::Strategy(strat) => strat.get(q).cloned(),
            P1Policy::Support(table) => from_support(game, q, table, rng),
            P1Policy::Uniform => {
                let menu = game.enabled1(q);
                Some(JokerAction::Regular(menu[rng.gen_range(0..menu.len())]))
            }
            P1Policy::Mixed { jokers, support } => match jokers.get(&q) {
                Some(action) => Some(action.clone()),
                None => from_support(game, q, support, rng),
            },
        }
    }
}

/// One simulated play and how it ended.
#[derive(Debug, Clone)]
pub struct SimRecord {
    pub play: Play<JokerAction>,
    /// The run reached a state where the policy had no legal choice.
    pub stuck: Option<StateId>,
}

impl SimRecord {
    pub fn end(&self) -> StateId {
        *self.play.states.last().unwrap()
    }

    pub fn steps(&self) -> usize {
        self.play.actions.len()
    }

    pub fn reached(&self, game: &ConcurrentGame) -> bool {
        self.play.win_index(game.goals()).is_finite()
    }

    /// Jokers spent strictly before the first goal visit, if the run won.
    pub fn jokers_spent(&self, game: &ConcurrentGame) -> Option<u64> {
        match self.play.win_index(game.goals()) {
            crate::cost::Cost::Fin(j) => Some(
                self.play.actions[..j as usize]
                    .iter()
                    .map(|(a, _)| a.cost())
                    .sum(),
            ),
            crate::cost::Cost::Inf => None,
        }
    }
}

/// Drive one play from `start` until a goal, a stranded policy, or the step
/// cap. The goal check happens before each step, so a goal start or a goal
/// hit stops the run immediately with the win index intact.
pub fn simulate_run(
    game: &ConcurrentGame,
    p1: P1Policy,
    p2: &P2Script,
    p3: &P3Script,
    start: StateId,
    step_cap: usize,
    rng: &mut dyn RngCore,
) -> SimRecord {
    let jg = JokerGame::new(game);
    let mut play = Play::new(start);
    let mut stuck = None;
    let mut q = start;
    let mut last1 = None;
    for j in 0..step_cap {
        if game.is_goal(q) {
            break;
        }
        let Some(action) = p1.choose(game, q, rng) else {
            stuck = Some(q);
            break;
        };
        let x = p2.respond(game, q, j, last1, rng);
        // Clamp scripted branch indices to the actual move set (a Joker move
        // ignores the resolution anyway).
        let clamped = |i: usize| match action {
            JokerAction::Regular(a) => i.min(game.moves(q, a, x).len().saturating_sub(1)),
            JokerAction::Joker { .. } => 0,
        };
        let resolve = match p3 {
            P3Script::First => Resolve::First,
            P3Script::Index(i) => Resolve::Index(clamped(*i)),
            P3Script::Table(table) => {
                let slot = match action {
                    JokerAction::Regular(a) => table.get(&(q, a, x)).copied().unwrap_or(0),
                    JokerAction::Joker { .. } => 0,
                };
                Resolve::Index(clamped(slot))
            }
            P3Script::Uniform => Resolve::Rng(rng),
        };
        let next = match jg.step(q, &action, x, resolve) {
            Ok(next) => next,
            Err(_) => {
                stuck = Some(q);
                break;
            }
        };
        last1 = Some(action.inspired());
        play.push(action, x, next);
        q = next;
    }
    play.cutoff = stuck.is_none() && !game.is_goal(q);
    SimRecord { play, stuck }
}
