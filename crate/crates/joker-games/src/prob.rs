//! Almost-sure winning: what randomization buys when force is impossible.
//!
//! A state can be unwinnable by any deterministic strategy yet winnable with
//! probability 1 by mixing actions — the matching-pennies fixture is the
//! canonical case. This module computes that qualitative winning set
//! (`p_attr`), layers it with Joker bridges exactly like the deterministic
//! construction (`p_joker_attractor`), and extracts randomized strategies as
//! uniform support sets plus deterministic Joker exceptions.
//!
//! The adversary model is harsh: Player 2 *and* the nondeterministic
//! resolution play arbitrary randomized strategies against Player 1. Under
//! that reading, "progress with positive probability" demands an action in
//! the support whose move set is *entirely* inside the progress region for
//! the given opponent action — a merely-overlapping move set lets the
//! resolution point its mass elsewhere, as one regression test pins down.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::attractor::{cpre1_witnesses, pre, pre_witnesses};
use crate::cost::Cost;
use crate::game::{Act1Id, Act2Id, ConcurrentGame, StateId};
use crate::joker::JokerAction;
use crate::sim::{simulate_run, P1Policy, P2Script, P3Script};

/// Greatest subset of `set` inside which Player 1 can confine the game
/// forever (against everything): νX. set ∩ CPre₁(X).
pub fn safe1(game: &ConcurrentGame, set: &BTreeSet<StateId>) -> BTreeSet<StateId> {
    let mut x = set.clone();
    loop {
        let kept: BTreeSet<StateId> = x
            .iter()
            .copied()
            .filter(|&q| !cpre1_witnesses(game, q, &x).is_empty())
            .collect();
        if kept.len() == x.len() {
            return kept;
        }
        x = kept;
    }
}

/// The almost-sure reachability set with its progress layers and supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbAttractor {
    pub targets: BTreeSet<StateId>,
    pub members: BTreeSet<StateId>,
    /// Progress layer: targets are 0, and from layer k the uniform support
    /// reaches layer < k with positive probability against everything.
    /// `∞` outside the winning set.
    pub pa_rank: Vec<Cost>,
    /// For each non-target member: every action that surely stays inside the
    /// winning set. Randomizing uniformly over this set wins almost surely.
    pub support: BTreeMap<StateId, Vec<Act1Id>>,
}

impl ProbAttractor {
    pub fn contains(&self, q: StateId) -> bool {
        self.members.contains(&q)
    }
}

/// Inner reachability stage: grow `targets` inside the candidate set `y` one
/// progress layer at a time. A state joins when its `y`-safe actions cover
/// every opponent action with a move set fully inside the grown region.
fn progress_layers(
    game: &ConcurrentGame,
    targets: &BTreeSet<StateId>,
    y: &BTreeSet<StateId>,
) -> (BTreeSet<StateId>, Vec<Cost>) {
    let mut rank = vec![Cost::Inf; game.n_states()];
    for &t in targets {
        rank[t.0] = Cost::ZERO;
    }
    let mut x = targets.clone();
    let mut k = 0u64;
    loop {
        k += 1;
        let mut added = Vec::new();
        for &q in y.iter() {
            if x.contains(&q) {
                continue;
            }
            let safe = cpre1_witnesses(game, q, y);
            if safe.is_empty() {
                continue;
            }
            let progresses = game.enabled2(q).iter().all(|&x2| {
                safe.iter()
                    .any(|&a| game.moves(q, a, x2).iter().all(|t| x.contains(t)))
            });
            if progresses {
                added.push(q);
            }
        }
        if added.is_empty() {
            return (x, rank);
        }
        for q in added {
            rank[q.0] = Cost::Fin(k);
            x.insert(q);
        }
    }
}

/// Almost-sure attractor: the nested fixed point νY. μX. (targets ∪
/// progress(Y, X)). Targets count as won on arrival, whether or not the game
/// could stay safe there afterwards.
pub fn p_attr(game: &ConcurrentGame, targets: &BTreeSet<StateId>) -> ProbAttractor {
    let mut y: BTreeSet<StateId> = game.state_ids().collect();
    let (members, pa_rank) = loop {
        let (x, rank) = progress_layers(game, targets, &y);
        if x == y {
            break (x, rank);
        }
        y = x;
    };
    let support = members
        .iter()
        .copied()
        .filter(|q| !targets.contains(q))
        .map(|q| (q, cpre1_witnesses(game, q, &members)))
        .collect();
    ProbAttractor {
        targets: targets.clone(),
        members,
        pa_rank,
        support,
    }
}

/// Joker layering over the almost-sure attractor: identical alternation to
/// the deterministic construction, with `p_attr` doing the attracting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbJokerAttractor {
    pub goals: BTreeSet<StateId>,
    /// Layer 0: almost-surely winnable without Jokers.
    pub base: ProbAttractor,
    pub pj_rank: Vec<Cost>,
    pub joker_state: Vec<bool>,
    pub layers: Vec<BTreeSet<StateId>>,
    pub joker_layers: Vec<BTreeSet<StateId>>,
    pub inner: Vec<ProbAttractor>,
    pub joker_witness: BTreeMap<StateId, Vec<(Act1Id, Act2Id, StateId)>>,
}

impl ProbJokerAttractor {
    pub fn members(&self) -> &BTreeSet<StateId> {
        self.layers.last().expect("at least layer 0")
    }

    pub fn contains(&self, q: StateId) -> bool {
        self.pj_rank[q.0].is_finite()
    }

    pub fn pj_rank(&self, q: StateId) -> Cost {
        self.pj_rank[q.0]
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

pub fn p_joker_attractor(game: &ConcurrentGame, goals: &BTreeSet<StateId>) -> ProbJokerAttractor {
    let base = p_attr(game, goals);
    let mut pj_rank = vec![Cost::Inf; game.n_states()];
    for &q in &base.members {
        pj_rank[q.0] = Cost::ZERO;
    }
    let mut joker_state = vec![false; game.n_states()];
    let mut layers = vec![base.members.clone()];
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
        let inner_att = p_attr(game, &spade);
        let next: BTreeSet<StateId> = current.union(&inner_att.members).copied().collect();
        if next == current {
            return ProbJokerAttractor {
                goals: goals.clone(),
                base,
                pj_rank,
                joker_state,
                layers,
                joker_layers,
                inner,
                joker_witness,
            };
        }
        let k = layers.len() as u64;
        for &q in next.difference(&current) {
            pj_rank[q.0] = Cost::Fin(k);
        }
        layers.push(next);
        joker_layers.push(spade);
        inner.push(inner_att);
    }
}

/// A randomized strategy in support form: deterministic Joker bridges at
/// Joker states, uniform mixing over safe actions everywhere else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbStrategy {
    pub jokers: BTreeMap<StateId, JokerAction>,
    pub support: BTreeMap<StateId, Vec<Act1Id>>,
    pub label: String,
}

impl ProbStrategy {
    pub fn as_policy(&self) -> P1Policy<'_> {
        P1Policy::Mixed {
            jokers: &self.jokers,
            support: &self.support,
        }
    }
}

/// Extract the canonical almost-sure strategy: each Joker state bridges
/// deterministically (probability 1) into the previous layer, and every
/// other winnable state mixes uniformly over its layer's safe support.
pub fn prob_joker_strategy(pja: &ProbJokerAttractor) -> ProbStrategy {
    let mut jokers = BTreeMap::new();
    let mut support = BTreeMap::new();
    for &q in pja.members() {
        if pja.goals.contains(&q) {
            continue;
        }
        if pja.is_joker_state(q) {
            let &(a, x, to) = pja.joker_witness[&q]
                .first()
                .expect("joker state without a bridging triple");
            jokers.insert(q, JokerAction::Joker { a, x, to });
        } else if pja.base.contains(q) {
            support.insert(q, pja.base.support[&q].clone());
        } else {
            let Cost::Fin(k) = pja.pj_rank(q) else {
                unreachable!("member with infinite rank")
            };
            support.insert(q, pja.inner[k as usize - 1].support[&q].clone());
        }
    }
    ProbStrategy {
        jokers,
        support,
        label: "almost-sure".into(),
    }
}

/// Aggregate result of seeded Monte-Carlo runs against uniform opposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McOutcome {
    pub runs: u64,
    pub reached: u64,
    /// Joker counts observed across winning runs.
    pub min_jokers: Option<u64>,
    pub max_jokers: Option<u64>,
    pub max_steps_won: Option<u64>,
}

/// Sample the strategy against a uniformly random opponent and resolution.
/// Reproducible from the seed; this validates the *winning* direction of the
/// analysis (a uniform opponent is weaker than the adversarial model).
pub fn monte_carlo(
    game: &ConcurrentGame,
    strat: &ProbStrategy,
    start: StateId,
    runs: u64,
    step_cap: usize,
    seed: u64,
) -> McOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcome = McOutcome {
        runs,
        reached: 0,
        min_jokers: None,
        max_jokers: None,
        max_steps_won: None,
    };
    for _ in 0..runs {
        let record = simulate_run(
            game,
            strat.as_policy(),
            &P2Script::Uniform,
            &P3Script::Uniform,
            start,
            step_cap,
            &mut rng,
        );
        if let Some(jokers) = record.jokers_spent(game) {
            outcome.reached += 1;
            outcome.min_jokers = Some(outcome.min_jokers.map_or(jokers, |m| m.min(jokers)));
            outcome.max_jokers = Some(outcome.max_jokers.map_or(jokers, |m| m.max(jokers)));
            let steps = record.steps() as u64;
            outcome.max_steps_won = Some(outcome.max_steps_won.map_or(steps, |m| m.max(steps)));
        }
    }
    outcome
}
