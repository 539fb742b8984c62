//! Seeded random game generation for tests and fuzzing.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::format::{RawGame, RawMove};
use crate::game::ConcurrentGame;

/// Shape parameters for [`random_game`]. All games produced under these
/// parameters are valid by construction (every state offers both players an
/// action, every enabled pair has at least one successor).
#[derive(Debug, Clone)]
pub struct GenParams {
    pub states: usize,
    pub act1: usize,
    pub act2: usize,
    /// Maximum successors per enabled action pair.
    pub branching: usize,
    /// Number of goal states.
    pub goals: usize,
    /// Chance that each action beyond the first is enabled in a state.
    pub enable_prob: f64,
    /// Chance of each successor beyond the first, up to `branching`.
    pub extra_target_prob: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            states: 6,
            act1: 2,
            act2: 2,
            branching: 2,
            goals: 1,
            enable_prob: 0.5,
            extra_target_prob: 0.3,
        }
    }
}

pub fn random_game(params: &GenParams, seed: u64) -> ConcurrentGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = params;
    assert!(p.states >= 1 && p.act1 >= 1 && p.act2 >= 1 && p.branching >= 1);
    assert!(p.goals >= 1 && p.goals <= p.states);

    let states: Vec<String> = (0..p.states).map(|i| format!("q{i}")).collect();
    let act1: Vec<String> = (0..p.act1).map(|i| format!("a{i}")).collect();
    let act2: Vec<String> = (0..p.act2).map(|i| format!("x{i}")).collect();

    let pick_menu = |rng: &mut ChaCha8Rng, n: usize| -> Vec<usize> {
        let forced = rng.gen_range(0..n);
        (0..n)
            .filter(|&i| i == forced || rng.gen_bool(p.enable_prob))
            .collect()
    };

    let mut enabled1 = std::collections::BTreeMap::new();
    let mut enabled2 = std::collections::BTreeMap::new();
    let mut moves = Vec::new();
    for (qi, q) in states.iter().enumerate() {
        let m1 = pick_menu(&mut rng, p.act1);
        let m2 = pick_menu(&mut rng, p.act2);
        for &a in &m1 {
            for &x in &m2 {
                let mut to = vec![rng.gen_range(0..p.states)];
                while to.len() < p.branching && rng.gen_bool(p.extra_target_prob) {
                    to.push(rng.gen_range(0..p.states));
                }
                to.sort_unstable();
                to.dedup();
                moves.push(RawMove {
                    from: q.clone(),
                    a1: act1[a].clone(),
                    a2: act2[x].clone(),
                    to: to.into_iter().map(|t| states[t].clone()).collect(),
                });
            }
        }
        let _ = qi;
        enabled1.insert(q.clone(), m1.into_iter().map(|a| act1[a].clone()).collect());
        enabled2.insert(q.clone(), m2.into_iter().map(|x| act2[x].clone()).collect());
    }

    let mut goal_pool: Vec<usize> = (0..p.states).collect();
    goal_pool.shuffle(&mut rng);
    let mut goals: Vec<String> = goal_pool[..p.goals].iter().map(|&g| states[g].clone()).collect();
    goals.sort();

    let raw = RawGame {
        schema: crate::format::GAME_SCHEMA.into(),
        initial: states[0].clone(),
        states,
        act1,
        act2,
        enabled1,
        enabled2,
        moves,
        goals,
    };
    raw.compile().expect("generated games are valid by construction")
}
