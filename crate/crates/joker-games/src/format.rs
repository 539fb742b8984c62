//! The on-disk JSON game format.
//!
//! A game file lists `states`, `initial`, the two action alphabets `act1` and
//! `act2`, per-state `enabled1`/`enabled2` menus, a flat `moves` list of
//! `{from, a1, a2, to: [...]}` entries, and `goals`. Serialization is
//! canonical — stable declaration order everywhere — so identical games
//! produce byte-identical files.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::game::{Act1Id, Act2Id, ConcurrentGame, StateId, Violation};

pub const GAME_SCHEMA: &str = "jokers.game.v1";

fn default_schema() -> String {
    GAME_SCHEMA.to_string()
}

/// One move entry: the successor set for an enabled action pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMove {
    pub from: String,
    pub a1: String,
    pub a2: String,
    pub to: Vec<String>,
}

/// A game description exactly as it appears on disk, before any checking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGame {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub states: Vec<String>,
    pub initial: String,
    pub act1: Vec<String>,
    pub act2: Vec<String>,
    pub enabled1: BTreeMap<String, Vec<String>>,
    pub enabled2: BTreeMap<String, Vec<String>>,
    pub moves: Vec<RawMove>,
    pub goals: Vec<String>,
}

/// Errors for loading a game from a file or string.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed game file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid game:\n{}", list_violations(.0))]
    Invalid(Vec<Violation>),
}

fn list_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| format!("  - {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

impl RawGame {
    /// Check the description against the arena invariants: all names resolve,
    /// every state offers both players at least one action, and move sets are
    /// nonempty exactly on the jointly enabled pairs.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.states.is_empty() {
            out.push(Violation::NoStates);
            return out;
        }
        let mut state_ids: HashMap<&str, usize> = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if state_ids.insert(s, i).is_some() {
                out.push(Violation::DuplicateState(s.clone()));
            }
        }
        let mut a1_ids: HashMap<&str, usize> = HashMap::new();
        for (i, a) in self.act1.iter().enumerate() {
            if a1_ids.insert(a, i).is_some() {
                out.push(Violation::DuplicateAction(a.clone()));
            }
        }
        let mut a2_ids: HashMap<&str, usize> = HashMap::new();
        for (i, x) in self.act2.iter().enumerate() {
            if a2_ids.insert(x, i).is_some() {
                out.push(Violation::DuplicateAction(x.clone()));
            }
        }

        let check_state = |context: String, name: &str, out: &mut Vec<Violation>| {
            if !state_ids.contains_key(name) {
                out.push(Violation::UnknownState {
                    context,
                    name: name.into(),
                });
            }
        };
        check_state("initial".into(), &self.initial, &mut out);
        for gst in &self.goals {
            check_state("goals".into(), gst, &mut out);
        }

        // Per-state menus: every state needs an entry with at least one
        // known action; entries for unknown states are also flagged.
        for (map, ids, player) in [
            (&self.enabled1, &a1_ids, 1u8),
            (&self.enabled2, &a2_ids, 2u8),
        ] {
            for (state, actions) in map {
                if !state_ids.contains_key(state.as_str()) {
                    out.push(Violation::UnknownState {
                        context: format!("enabled{player}"),
                        name: state.clone(),
                    });
                }
                for a in actions {
                    if !ids.contains_key(a.as_str()) {
                        out.push(Violation::UnknownAction {
                            context: format!("enabled{player} of {state}"),
                            name: a.clone(),
                        });
                    }
                }
            }
            for state in &self.states {
                if map.get(state).map_or(true, |m| m.is_empty()) {
                    out.push(Violation::EmptyMenu {
                        state: state.clone(),
                        player,
                    });
                }
            }
        }

        // Move entries: known endpoints, no duplicates, nonempty targets.
        let mut seen: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
        for mv in &self.moves {
            let from = state_ids.get(mv.from.as_str());
            let a1 = a1_ids.get(mv.a1.as_str());
            let a2 = a2_ids.get(mv.a2.as_str());
            let context = format!("move from {}", mv.from);
            if from.is_none() {
                check_state("moves".into(), &mv.from, &mut out);
            }
            if a1.is_none() {
                out.push(Violation::UnknownAction {
                    context: context.clone(),
                    name: mv.a1.clone(),
                });
            }
            if a2.is_none() {
                out.push(Violation::UnknownAction {
                    context: context.clone(),
                    name: mv.a2.clone(),
                });
            }
            for t in &mv.to {
                check_state(context.clone(), t, &mut out);
            }
            if mv.to.is_empty() {
                out.push(Violation::EmptyMoveTargets {
                    state: mv.from.clone(),
                    a1: mv.a1.clone(),
                    a2: mv.a2.clone(),
                });
            }
            if let (Some(&q), Some(&a), Some(&x)) = (from, a1, a2) {
                if !seen.insert((q, a, x)) {
                    out.push(Violation::DuplicateMoveEntry {
                        state: mv.from.clone(),
                        a1: mv.a1.clone(),
                        a2: mv.a2.clone(),
                    });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }

        // With all names resolved, enforce the enabledness contract:
        // moves(q, a, x) nonempty iff a and x are both enabled in q.
        for (qi, state) in self.states.iter().enumerate() {
            let m1: BTreeSet<usize> = self.enabled1[state]
                .iter()
                .map(|a| a1_ids[a.as_str()])
                .collect();
            let m2: BTreeSet<usize> = self.enabled2[state]
                .iter()
                .map(|x| a2_ids[x.as_str()])
                .collect();
            for a in 0..self.act1.len() {
                for x in 0..self.act2.len() {
                    let enabled = m1.contains(&a) && m2.contains(&x);
                    let has = seen.contains(&(qi, a, x));
                    if enabled && !has {
                        out.push(Violation::EnabledPairWithoutMoves {
                            state: state.clone(),
                            a1: self.act1[a].clone(),
                            a2: self.act2[x].clone(),
                        });
                    }
                    if !enabled && has {
                        out.push(Violation::MovesOnDisabledPair {
                            state: state.clone(),
                            a1: self.act1[a].clone(),
                            a2: self.act2[x].clone(),
                        });
                    }
                }
            }
        }
        out
    }

    /// Build the indexed arena. Fails with the full violation list if the
    /// description is unsound.
    pub fn compile(&self) -> Result<ConcurrentGame, Vec<Violation>> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(violations);
        }
        let state_ids: HashMap<&str, StateId> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), StateId(i)))
            .collect();
        let a1_ids: HashMap<&str, Act1Id> = self
            .act1
            .iter()
            .enumerate()
            .map(|(i, a)| (a.as_str(), Act1Id(i)))
            .collect();
        let a2_ids: HashMap<&str, Act2Id> = self
            .act2
            .iter()
            .enumerate()
            .map(|(i, x)| (x.as_str(), Act2Id(i)))
            .collect();

        let enabled1: Vec<Vec<Act1Id>> = self
            .states
            .iter()
            .map(|s| {
                let mut v: Vec<Act1Id> =
                    self.enabled1[s].iter().map(|a| a1_ids[a.as_str()]).collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        let enabled2: Vec<Vec<Act2Id>> = self
            .states
            .iter()
            .map(|s| {
                let mut v: Vec<Act2Id> =
                    self.enabled2[s].iter().map(|x| a2_ids[x.as_str()]).collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();

        let mut moves = vec![Vec::new(); self.states.len() * self.act1.len() * self.act2.len()];
        for mv in &self.moves {
            let q = state_ids[mv.from.as_str()];
            let a = a1_ids[mv.a1.as_str()];
            let x = a2_ids[mv.a2.as_str()];
            let slot = (q.0 * self.act1.len() + a.0) * self.act2.len() + x.0;
            let mut to: Vec<StateId> = mv.to.iter().map(|t| state_ids[t.as_str()]).collect();
            to.sort_unstable();
            to.dedup();
            moves[slot] = to;
        }

        let goals: BTreeSet<StateId> =
            self.goals.iter().map(|g| state_ids[g.as_str()]).collect();

        Ok(ConcurrentGame::from_parts(
            self.states.clone(),
            state_ids[self.initial.as_str()],
            self.act1.clone(),
            self.act2.clone(),
            enabled1,
            enabled2,
            moves,
            goals,
        ))
    }
}

/// Render a compiled game back into its canonical on-disk form: moves sorted
/// by `(from, a1, a2)`, targets by state index, menus in alphabet order.
pub fn to_raw(game: &ConcurrentGame) -> RawGame {
    let mut moves = Vec::new();
    for q in game.state_ids() {
        for &a in game.enabled1(q) {
            for &x in game.enabled2(q) {
                moves.push(RawMove {
                    from: game.state_name(q).into(),
                    a1: game.act1_name(a).into(),
                    a2: game.act2_name(x).into(),
                    to: game
                        .moves(q, a, x)
                        .iter()
                        .map(|&t| game.state_name(t).into())
                        .collect(),
                });
            }
        }
    }
    RawGame {
        schema: GAME_SCHEMA.into(),
        states: game.state_ids().map(|q| game.state_name(q).into()).collect(),
        initial: game.state_name(game.initial()).into(),
        act1: game.act1_names().to_vec(),
        act2: game.act2_names().to_vec(),
        enabled1: game
            .state_ids()
            .map(|q| {
                (
                    game.state_name(q).into(),
                    game.enabled1(q).iter().map(|&a| game.act1_name(a).into()).collect(),
                )
            })
            .collect(),
        enabled2: game
            .state_ids()
            .map(|q| {
                (
                    game.state_name(q).into(),
                    game.enabled2(q).iter().map(|&x| game.act2_name(x).into()).collect(),
                )
            })
            .collect(),
        moves,
        goals: game.goals().iter().map(|&g| game.state_name(g).into()).collect(),
    }
}

pub fn to_json(game: &ConcurrentGame) -> String {
    let mut s = serde_json::to_string_pretty(&to_raw(game)).expect("games serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<ConcurrentGame, LoadError> {
    let raw: RawGame = serde_json::from_str(text)?;
    raw.compile().map_err(LoadError::Invalid)
}

pub fn load_game(path: &Path) -> Result<ConcurrentGame, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_json(&text)
}
