//! The project's exit gate: ten end-to-end checks, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them all). Every check is
//! deterministic; the timed ones measure against their stated budgets.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use joker_games::attractor::{can_reach, joker_attractor};
use joker_games::cost::Cost;
use joker_games::fixtures;
use joker_games::game::{ConcurrentGame, StateId};
use joker_games::generate::{random_game, GenParams};
use joker_games::joker::{
    outcome_summary, strategy_cost, JokerAction, PositionalStrategy,
};
use joker_games::mbt::{self, LtsParams};
use joker_games::oracle;
use joker_games::prob::{monte_carlo, p_joker_attractor, prob_joker_strategy};
use joker_games::sim::{simulate_run, P1Policy, P2Script, P3Script};
use joker_games::strategy::{distances, joker_attractor_strategy, short_joker_strategy};

/// Run one criterion body and print its verdict line.
fn criterion(n: usize, title: &str, body: impl FnOnce() -> Result<String, String>) {
    match body() {
        Ok(note) => println!("criterion {n:2} PASS  {title} — {note}"),
        Err(msg) => {
            println!("criterion {n:2} FAIL  {title} — {msg}");
            panic!("criterion {n} failed: {msg}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn id(g: &ConcurrentGame, name: &str) -> StateId {
    g.state_id(name).expect("state exists")
}

fn names(g: &ConcurrentGame, set: &BTreeSet<StateId>) -> BTreeSet<String> {
    set.iter().map(|&q| g.state_name(q).to_string()).collect()
}

fn set_of(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// The 500-game pool: up to 8 states, up to 3 actions per player,
/// branching up to 2, goal count varying — all derived from the index.
fn small_pool() -> Vec<(u64, ConcurrentGame)> {
    (0..500)
        .map(|i| {
            let states = 2 + (i as usize) % 7;
            let params = GenParams {
                states,
                act1: 1 + (i as usize / 7) % 3,
                act2: 1 + (i as usize / 11) % 3,
                branching: 1 + (i as usize) % 2,
                goals: 1 + (i as usize / 13) % states,
                enable_prob: 0.5,
                extra_target_prob: 0.3,
            };
            (i, random_game(&params, 1_000 + i))
        })
        .collect()
}

/// The 100-game pool for exhaustive adversary sweeps: up to 6 states, two
/// actions per player, and only seeds whose positional adversary family
/// stays enumerable (at most 20k pairs), so the sweep is complete per game.
fn tiny_pool() -> Vec<(u64, ConcurrentGame, oracle::AdversaryFamily)> {
    let mut picked = Vec::new();
    let mut seed = 0u64;
    while picked.len() < 100 {
        let params = GenParams {
            states: 2 + (seed as usize) % 5,
            act1: 1 + (seed as usize) % 3,
            act2: 1 + (seed as usize / 3) % 3,
            branching: 2,
            goals: 1,
            enable_prob: 0.8,
            extra_target_prob: 0.5,
        };
        let game = random_game(&params, 2_000 + seed);
        if let Ok(family) = oracle::enumerate_adversaries(&game, 20_000) {
            picked.push((2_000 + seed, game, family));
        }
        seed += 1;
    }
    picked
}

#[test]
fn criterion_01_two_condition_game_solution() {
    criterion(1, "rank table and layers of the two-condition game", || {
        let g = fixtures::load("g_avb");

        // Warmed timing: take the fastest of a few solves so scheduler
        // noise cannot inflate a microsecond-scale measurement.
        let mut best = Duration::MAX;
        for _ in 0..10 {
            let t = Instant::now();
            std::hint::black_box(joker_attractor(&g, g.goals()));
            best = best.min(t.elapsed());
        }
        let ja = joker_attractor(&g, g.goals());

        let expected = [
            ("1", Cost::Fin(1)),
            ("2", Cost::Fin(1)),
            ("3", Cost::Fin(2)),
            ("4", Cost::Fin(1)),
            ("smiley", Cost::ZERO),
            ("frownie", Cost::Inf),
        ];
        for (name, want) in expected {
            let got = ja.j_rank(id(&g, name));
            ensure!(got == want, "jRank({name}) = {got}, want {want}");
        }
        let jokers = names(&g, &ja.joker_states());
        ensure!(
            jokers == set_of(&["1", "2", "3"]),
            "joker states {jokers:?}, want {{1, 2, 3}}"
        );
        let layers: Vec<BTreeSet<String>> =
            ja.layers.iter().map(|l| names(&g, l)).collect();
        let want = vec![
            set_of(&["smiley"]),
            set_of(&["1", "2", "4", "smiley"]),
            set_of(&["1", "2", "3", "4", "smiley"]),
        ];
        ensure!(layers == want, "layer sets {layers:?}, want {want:?}");
        ensure!(best < Duration::from_millis(1), "solve took {best:?}, budget 1 ms");
        Ok(format!("ranks, joker states, 3 layers exact; solved in {best:?}"))
    });
}

#[test]
fn criterion_02_value_iteration_equivalence() {
    criterion(2, "value iteration matches layered ranks on 504 games", || {
        let t = Instant::now();
        let mut games: Vec<(String, ConcurrentGame)> = ["g_avb", "g_cost", "g_hope", "penny"]
            .iter()
            .map(|n| (n.to_string(), fixtures::load(n)))
            .collect();
        games.extend(
            small_pool()
                .into_iter()
                .map(|(i, g)| (format!("seeded #{i}"), g)),
        );
        let total = games.len();
        for (name, g) in &games {
            let ja = joker_attractor(g, g.goals());
            let vt = oracle::value_iterate(g);
            for q in g.state_ids() {
                ensure!(
                    vt.v(q) == ja.j_rank(q),
                    "{name}: v({}) = {} but jRank = {}",
                    g.state_name(q),
                    vt.v(q),
                    ja.j_rank(q)
                );
            }
        }
        let elapsed = t.elapsed();
        ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}, budget 10 s");
        Ok(format!("{total} games pointwise equal in {elapsed:?}"))
    });
}

#[test]
fn criterion_03_exact_joker_spend_under_every_positional_adversary() {
    criterion(3, "attractor strategy spends exactly jRank against all pairs", || {
        let t = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut games: Vec<(String, ConcurrentGame, oracle::AdversaryFamily)> = Vec::new();
        for name in fixtures::ALL {
            let g = fixtures::load(name);
            let family = oracle::enumerate_adversaries(&g, 20_000)
                .map_err(|e| format!("{name}: {e}"))?;
            games.push((name.to_string(), g, family));
        }
        games.extend(
            tiny_pool()
                .into_iter()
                .map(|(s, g, f)| (format!("seeded #{s}"), g, f)),
        );

        let mut plays: u64 = 0;
        for (name, g, family) in &games {
            let ja = joker_attractor(g, g.goals());
            let strat = joker_attractor_strategy(&ja);
            let cap = 4 * g.n_states() + 4;
            for (p2, p3) in family.pairs() {
                for &q in ja.members() {
                    let Cost::Fin(rank) = ja.j_rank(q) else { unreachable!() };
                    let rec = simulate_run(
                        g,
                        P1Policy::Strategy(&strat),
                        &p2,
                        &p3,
                        q,
                        cap,
                        &mut rng,
                    );
                    plays += 1;
                    ensure!(
                        rec.reached(g),
                        "{name}: a run from {} did not reach the goals",
                        g.state_name(q)
                    );
                    let spent = rec.jokers_spent(g);
                    ensure!(
                        spent == Some(rank),
                        "{name}: from {} spent {spent:?}, want {rank}",
                        g.state_name(q)
                    );
                }
            }
        }
        let elapsed = t.elapsed();
        ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}, budget 60 s");
        Ok(format!(
            "{} games, {plays} deterministic plays, all exact in {elapsed:?}",
            games.len()
        ))
    });
}

#[test]
fn criterion_04_determinacy_dichotomy() {
    criterion(4, "winnable = backward-reachable, rest has no path in", || {
        let mut games: Vec<(String, ConcurrentGame)> = fixtures::ALL
            .iter()
            .map(|n| (n.to_string(), fixtures::load(n)))
            .collect();
        games.extend(
            small_pool()
                .into_iter()
                .map(|(i, g)| (format!("small #{i}"), g)),
        );
        games.extend(
            tiny_pool()
                .into_iter()
                .map(|(s, g, _)| (format!("tiny #{s}"), g)),
        );
        let total = games.len();
        for (name, g) in &games {
            let ja = joker_attractor(g, g.goals());
            let reach = can_reach(g, g.goals());
            ensure!(
                ja.members() == &reach,
                "{name}: winnable set differs from backward reachability"
            );
            for q in g.state_ids() {
                if !reach.contains(&q) {
                    ensure!(
                        g.post(q).is_disjoint(&reach),
                        "{name}: {} is outside yet steps inside",
                        g.state_name(q)
                    );
                }
            }
        }
        Ok(format!("set equality and outside-closure on {total} games"))
    });
}

#[test]
fn criterion_05_short_strategy_wins_in_three_moves() {
    criterion(5, "corridor game: 3 moves for short vs 4 for attractor", || {
        let g = fixtures::load("g_cost");
        let ja = joker_attractor(&g, g.goals());
        let one = id(&g, "1");

        let dt = distances(&g, &ja);
        ensure!(dt.d[one.0] == Cost::Fin(3), "d(1) = {}, want 3", dt.d[one.0]);

        let short = short_joker_strategy(&g, &ja);
        let s = outcome_summary(&g, &short, one);
        ensure!(s.winning, "short strategy is not surely winning from 1");
        ensure!(
            s.min_moves == Some(3) && s.min_moves_jokers == Some(1),
            "short best outcome: {:?} moves / {:?} Jokers, want 3 / 1",
            s.min_moves,
            s.min_moves_jokers
        );

        let attr = joker_attractor_strategy(&ja);
        let a = outcome_summary(&g, &attr, one);
        ensure!(a.winning, "attractor strategy is not surely winning from 1");
        ensure!(
            a.min_moves == Some(4) && a.exactly(1),
            "attractor outcomes: best {:?} moves, Jokers {:?}..{:?}, want 4 and exactly 1",
            a.min_moves,
            a.min_jokers,
            a.max_jokers
        );
        Ok("d(1)=3; short wins in 3 moves / 1 Joker, attractor needs 4 / 1".to_string())
    });
}

#[test]
fn criterion_06_cost_minimal_strategies_may_hope() {
    criterion(6, "a rank-1 state admits a cost-minimal 0-Joker outcome", || {
        let g = fixtures::load("g_hope");
        let ja = joker_attractor(&g, g.goals());
        let one = id(&g, "1");
        ensure!(
            ja.j_rank(one) == Cost::Fin(1),
            "jRank(1) = {}, want 1",
            ja.j_rank(one)
        );

        let all = oracle::enumerate_strategies(&g, 1_000_000).map_err(|e| e.to_string())?;
        let hopeful = all.iter().find(|s| {
            strategy_cost(&g, s, one) == Cost::Fin(1)
                && outcome_summary(&g, s, one).min_jokers == Some(0)
        });
        ensure!(
            hopeful.is_some(),
            "none of the {} strategies is cost-minimal with a 0-Joker outcome",
            all.len()
        );

        let attr = joker_attractor_strategy(&ja);
        let s = outcome_summary(&g, &attr, one);
        ensure!(
            s.winning && s.exactly(1),
            "attractor outcomes use {:?}..{:?} Jokers, want exactly 1",
            s.min_jokers,
            s.max_jokers
        );
        Ok(format!(
            "among {} strategies: one wins at cost 1 with a free best case; \
             the attractor always pays 1",
            all.len()
        ))
    });
}

#[test]
fn criterion_07_penny_match_needs_no_joker_almost_surely() {
    criterion(7, "mixing beats the rank: pJRank 0 vs jRank 1, 10k runs", || {
        let g = fixtures::load("penny");
        let one = id(&g, "1");
        let ja = joker_attractor(&g, g.goals());
        let pja = p_joker_attractor(&g, g.goals());
        ensure!(ja.j_rank(one) == Cost::Fin(1), "jRank(1) = {}", ja.j_rank(one));
        ensure!(pja.pj_rank(one) == Cost::ZERO, "pJRank(1) = {}", pja.pj_rank(one));

        let strat = prob_joker_strategy(&pja);
        let support: Vec<String> = strat.support[&one]
            .iter()
            .map(|&a| g.act1_name(a).to_string())
            .collect();
        ensure!(support == ["H", "T"], "support at 1 is {support:?}, want [H, T]");

        let cap = 10 * g.n_states();
        let mc = monte_carlo(&g, &strat, one, 10_000, cap, 2024);
        ensure!(
            mc.reached == 10_000,
            "{} of 10000 runs reached the goal within {cap} steps",
            mc.reached
        );
        ensure!(
            mc.min_jokers == Some(0) && mc.max_jokers == Some(0),
            "Joker usage {:?}..{:?}, want 0..0",
            mc.min_jokers,
            mc.max_jokers
        );
        Ok(format!(
            "ranks 1 vs 0; 10000/10000 seeded runs reached within {cap} steps, 0 Jokers"
        ))
    });
}

#[test]
fn criterion_08_reactive_opponents_split_the_inspired_strategies() {
    criterion(8, "memoryful opponents order inspired strategies both ways", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0);

        // Middle game: the 2-Joker route through state 2 survives the
        // react-to-b opponent; the 1-Joker optimum does not.
        let g = fixtures::load("dom_middle");
        let a1 = |n: &str| g.act1_id(n).unwrap();
        let a2 = |n: &str| g.act2_id(n).unwrap();
        let mut two_joker = PositionalStrategy::new("two-joker");
        two_joker
            .choice
            .insert(id(&g, "1"), JokerAction::Regular(a1("a")));
        two_joker.choice.insert(
            id(&g, "2"),
            JokerAction::Joker { a: a1("a"), x: a2("h"), to: id(&g, "3") },
        );
        two_joker.choice.insert(
            id(&g, "3"),
            JokerAction::Joker { a: a1("a"), x: a2("h"), to: id(&g, "smiley") },
        );
        ensure!(
            strategy_cost(&g, &two_joker, g.initial()) == Cost::Fin(2),
            "the detour strategy does not cost 2 Jokers"
        );
        let one_joker = joker_attractor_strategy(&ja_of(&g));
        ensure!(
            strategy_cost(&g, &one_joker, g.initial()) == Cost::Fin(1),
            "the attractor strategy does not cost 1 Joker"
        );

        let react_to_b = P2Script::LastAction {
            rules: [(a1("b"), a2("u"))].into_iter().collect(),
            default: a2("h"),
        };
        let mut outcome = |strat: &PositionalStrategy| {
            simulate_run(
                &g,
                P1Policy::Strategy(&strat.inspired()),
                &react_to_b,
                &P3Script::First,
                g.initial(),
                32,
                &mut rng,
            )
            .reached(&g)
        };
        ensure!(outcome(&two_joker), "2-Joker-inspired lost to the reactor");
        ensure!(!outcome(&one_joker), "1-Joker-inspired won against the reactor");

        // Right game: an opponent opening with u then settling on h
        // rewards the patient self-loop and punishes the direct dash.
        let g = fixtures::load("dom_right");
        let pick = |act: &str| {
            let mut s = PositionalStrategy::new(act);
            s.choice.insert(
                id(&g, "1"),
                JokerAction::Regular(g.act1_id(act).unwrap()),
            );
            s
        };
        let feint = P2Script::Phased {
            first: g.act2_id("u").unwrap(),
            rest: g.act2_id("h").unwrap(),
        };
        let mut wins = |s: &PositionalStrategy| {
            simulate_run(
                &g,
                P1Policy::Strategy(s),
                &feint,
                &P3Script::First,
                g.initial(),
                32,
                &mut rng,
            )
            .reached(&g)
        };
        ensure!(wins(&pick("b")), "the patient dashed strategy lost to the feint");
        ensure!(!wins(&pick("a")), "the direct dotted strategy beat the feint");
        Ok("2-Joker-inspired beats the reactor where the optimum fails; \
            patience beats the feint where the dash fails"
            .to_string())
    });
}

fn ja_of(g: &ConcurrentGame) -> joker_games::attractor::JokerAttractor {
    joker_attractor(g, g.goals())
}

/// States reachable from the initial state by any cooperative play.
fn forward_reachable(game: &ConcurrentGame) -> BTreeSet<StateId> {
    let mut seen = BTreeSet::from([game.initial()]);
    let mut frontier = vec![game.initial()];
    while let Some(q) = frontier.pop() {
        for next in game.post(q) {
            if seen.insert(next) {
                frontier.push(next);
            }
        }
    }
    seen
}

/// Draw `n` reachable goal candidates (excluding the start and the stopped
/// sink) with a seeded generator — the campaign's goal-selection procedure.
fn sample_goals(game: &ConcurrentGame, n: usize, seed: u64) -> Vec<StateId> {
    let stopped = game.state_id("stopped");
    let candidates: Vec<StateId> = forward_reachable(game)
        .into_iter()
        .filter(|&q| q != game.initial() && Some(q) != stopped)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    candidates.choose_multiple(&mut rng, n).copied().collect()
}

#[test]
fn criterion_09_derived_testers_beat_random_exploration() {
    criterion(9, "joker testers dominate random testing on 15 goals", || {
        let t = Instant::now();
        // Three generated models of growing size; goal draws are seeded.
        let classes: [(LtsParams, u64, u64); 3] = [
            (LtsParams { states: 60, inputs: 3, outputs: 3, extra: 60 }, 40, 2),
            (LtsParams { states: 140, inputs: 4, outputs: 4, extra: 240 }, 24, 2),
            (LtsParams { states: 280, inputs: 5, outputs: 5, extra: 520 }, 22, 1),
        ];
        let runs = 1_000;
        let campaign_seed = 2_024;
        let mut checked = 0;
        let mut best_gap: i64 = 0;
        let mut witness = None;
        for (params, lts_seed, goal_seed) in classes {
            let lts = mbt::random_lts(&params, lts_seed);
            let game = mbt::lts_to_game(&lts).map_err(|e| e.to_string())?;
            let cap = 10 * game.n_states();
            for goal in sample_goals(&game, 5, goal_seed) {
                let (joker, random) =
                    mbt::run_experiment(&game, goal, runs, campaign_seed, cap);
                let name = game.state_name(goal).to_string();
                ensure!(
                    joker.reached >= random.reached,
                    "{} states, goal {name}: joker reached {} < random {}",
                    params.states,
                    joker.reached,
                    random.reached
                );
                if let (Some(jm), Some(rm)) = (joker.mean_steps, random.mean_steps) {
                    if joker.reached > 0 && random.reached > 0 {
                        ensure!(
                            jm <= rm,
                            "{} states, goal {name}: joker mean {jm:.2} > random {rm:.2}",
                            params.states
                        );
                    }
                }
                let gap = joker.reached as i64 - random.reached as i64;
                if gap > best_gap {
                    best_gap = gap;
                    witness = Some((params.states, name.clone()));
                }
                checked += 1;

                // Fixed seeds make the whole campaign reproducible.
                if checked == 1 {
                    let (again, _) =
                        mbt::run_experiment(&game, goal, runs, campaign_seed, cap);
                    ensure!(
                        again.reached == joker.reached
                            && again.mean_steps == joker.mean_steps,
                        "re-running the first experiment changed its statistics"
                    );
                }
            }
        }
        ensure!(checked == 15, "expected 15 goals, measured {checked}");
        ensure!(
            best_gap >= (runs as i64) / 5,
            "largest reach gap {best_gap} is below 20% of {runs} runs"
        );
        let elapsed = t.elapsed();
        ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}, budget 60 s");
        let (states, goal) = witness.unwrap();
        Ok(format!(
            "15/15 goals dominated; widest gap {best_gap}/{runs} at goal {goal} \
             of the {states}-state model; {elapsed:?}"
        ))
    });
}

#[test]
fn criterion_10_almost_sure_layers_engulf_the_sure_ones() {
    criterion(10, "pJAttr contains JAttr layerwise, pJRank <= jRank", || {
        let mut games: Vec<(String, ConcurrentGame)> = fixtures::ALL
            .iter()
            .map(|n| (n.to_string(), fixtures::load(n)))
            .collect();
        games.extend(
            small_pool()
                .into_iter()
                .map(|(i, g)| (format!("small #{i}"), g)),
        );
        games.extend(
            tiny_pool()
                .into_iter()
                .map(|(s, g, _)| (format!("tiny #{s}"), g)),
        );
        let total = games.len();
        for (name, g) in &games {
            let ja = joker_attractor(g, g.goals());
            let pja = p_joker_attractor(g, g.goals());
            for (k, layer) in ja.layers.iter().enumerate() {
                let p_layer = &pja.layers[k.min(pja.layers.len() - 1)];
                ensure!(
                    layer.is_subset(p_layer),
                    "{name}: layer {k} is not contained in its almost-sure layer"
                );
            }
            for q in g.state_ids() {
                ensure!(
                    pja.pj_rank(q) <= ja.j_rank(q),
                    "{name}: pJRank({}) = {} > jRank = {}",
                    g.state_name(q),
                    pja.pj_rank(q),
                    ja.j_rank(q)
                );
            }
        }
        Ok(format!("containment and rank order hold on {total} games"))
    });
}
