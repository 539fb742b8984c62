//! Model-based testing on top of the game machinery.
//!
//! A specification arrives as an input/output labeled transition system,
//! gets recast as a game between the tester and the implementation, and the
//! Joker analysis of that game yields a test strategy: play toward the goal
//! state, and where nothing can be forced, play the action some lucky
//! implementation answer would reward. The strategy is measured against
//! random exploration on a simulated impartial implementation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::attractor::joker_attractor;
use crate::cost::Cost;
use crate::format::{RawGame, RawMove};
use crate::game::{Act1Id, ConcurrentGame, StateId};
use crate::joker::PositionalStrategy;
use crate::sim::{simulate_run, P1Policy, P2Script, P3Script};
use crate::strategy::joker_attractor_strategy;

/// An input/output labeled transition system. Labels ending in `?` are
/// inputs (the tester drives them), labels ending in `!` are outputs (the
/// implementation fires them); every label must carry one of the two marks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lts {
    pub n_states: usize,
    pub initial: usize,
    pub transitions: Vec<(usize, String, usize)>,
}

impl Lts {
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.n_states == 0 {
            out.push("no states".into());
        }
        if self.initial >= self.n_states {
            out.push(format!("initial state {} out of range", self.initial));
        }
        for (src, label, dst) in &self.transitions {
            if *src >= self.n_states || *dst >= self.n_states {
                out.push(format!("transition ({src}, \"{label}\", {dst}) out of range"));
            }
            if !label_is_input(label) && !label_is_output(label) {
                out.push(format!(
                    "label \"{label}\" is neither an input (`?`) nor an output (`!`)"
                ));
            }
        }
        out
    }
}

pub fn label_is_input(label: &str) -> bool {
    label.ends_with('?')
}

pub fn label_is_output(label: &str) -> bool {
    label.ends_with('!')
}

/// Parse the Aldebaran textual format: a `des (initial, #trans, #states)`
/// header followed by one `(src, "label", dst)` line per transition. The
/// declared counts are checked, not trusted.
pub fn parse_aut(text: &str) -> Result<Lts, String> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or("empty file")?;
    let triple = header
        .strip_prefix("des")
        .ok_or_else(|| format!("expected a `des (...)` header, got {header:?}"))?;
    let (initial, declared, n_states) = {
        let parts = split_triple(triple)?;
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| format!("bad number {s:?} in header"))
        };
        (num(&parts.0)?, num(&parts.1)?, num(&parts.2)?)
    };
    let mut transitions = Vec::new();
    for line in lines {
        let (src, label, dst) = split_triple(line)?;
        let src = src
            .parse::<usize>()
            .map_err(|_| format!("bad source state {src:?}"))?;
        let dst = dst
            .parse::<usize>()
            .map_err(|_| format!("bad target state {dst:?}"))?;
        let label = label
            .strip_prefix('"')
            .and_then(|l| l.strip_suffix('"'))
            .unwrap_or(&label)
            .to_string();
        transitions.push((src, label, dst));
    }
    if transitions.len() != declared {
        return Err(format!(
            "header declares {declared} transitions, file has {}",
            transitions.len()
        ));
    }
    let lts = Lts {
        n_states,
        initial,
        transitions,
    };
    let issues = lts.validate();
    if issues.is_empty() {
        Ok(lts)
    } else {
        Err(issues.join("; "))
    }
}

/// `(a, b, c)` → the three comma-separated fields, outer parentheses
/// required. Labels contain no commas in any file we accept.
fn split_triple(s: &str) -> Result<(String, String, String), String> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| format!("expected a parenthesized triple, got {s:?}"))?;
    let fields: Vec<&str> = inner.split(',').map(str::trim).collect();
    match fields.as_slice() {
        [a, b, c] => Ok((a.to_string(), b.to_string(), c.to_string())),
        _ => Err(format!("expected three fields in {s:?}")),
    }
}

pub fn write_aut(lts: &Lts) -> String {
    let mut out = format!(
        "des ({}, {}, {})\n",
        lts.initial,
        lts.transitions.len(),
        lts.n_states
    );
    for (src, label, dst) in &lts.transitions {
        out.push_str(&format!("({src}, \"{label}\", {dst})\n"));
    }
    out
}

/// Shape of a generated specification model.
#[derive(Debug, Clone)]
pub struct LtsParams {
    pub states: usize,
    /// Distinct input labels (`i0?`, `i1?`, …).
    pub inputs: usize,
    /// Distinct output labels (`o0!`, `o1!`, …).
    pub outputs: usize,
    /// Transitions added on top of the spanning tree that keeps every state
    /// reachable.
    pub extra: usize,
}

impl Default for LtsParams {
    fn default() -> Self {
        LtsParams {
            states: 60,
            inputs: 3,
            outputs: 3,
            extra: 90,
        }
    }
}

/// A random LTS: a spanning tree from state 0 (so everything is reachable),
/// plus `extra` arbitrary transitions, labels drawn evenly from the input
/// and output alphabets.
pub fn random_lts(params: &LtsParams, seed: u64) -> Lts {
    assert!(params.states > 0 && params.inputs > 0 && params.outputs > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick_label = |rng: &mut ChaCha8Rng| -> String {
        if rng.gen_bool(0.5) {
            format!("i{}?", rng.gen_range(0..params.inputs))
        } else {
            format!("o{}!", rng.gen_range(0..params.outputs))
        }
    };
    let mut transitions = Vec::new();
    for s in 1..params.states {
        let parent = rng.gen_range(0..s);
        let label = pick_label(&mut rng);
        transitions.push((parent, label, s));
    }
    for _ in 0..params.extra {
        let src = rng.gen_range(0..params.states);
        let dst = rng.gen_range(0..params.states);
        let label = pick_label(&mut rng);
        transitions.push((src, label, dst));
    }
    transitions.sort();
    transitions.dedup();
    Lts {
        n_states: params.states,
        initial: 0,
        transitions,
    }
}

/// Recast an LTS as a tester-versus-implementation game.
///
/// The tester (Player 1) may feed any currently enabled input, `observe`,
/// or `stop`; the implementation (Player 2) may fire any enabled output or
/// do `nothing`. When an input and an output race, either may win, so the
/// move set is the union of both readings. Observing against `nothing` is a
/// self-loop — quiescence, try again. `stop` leads to an absorbing `stopped`
/// state from anywhere. States keep their LTS numbers as names, and the
/// result carries no goal states: those are chosen per test campaign.
pub fn lts_to_game(lts: &Lts) -> Result<ConcurrentGame, String> {
    let issues = lts.validate();
    if !issues.is_empty() {
        return Err(issues.join("; "));
    }
    let mut succ: BTreeMap<(usize, &str), BTreeSet<usize>> = BTreeMap::new();
    let mut inputs: BTreeSet<&str> = BTreeSet::new();
    let mut outputs: BTreeSet<&str> = BTreeSet::new();
    for (src, label, dst) in &lts.transitions {
        succ.entry((*src, label)).or_default().insert(*dst);
        if label_is_input(label) {
            inputs.insert(label);
        } else {
            outputs.insert(label);
        }
    }

    let state_name = |s: usize| s.to_string();
    let mut states: Vec<String> = (0..lts.n_states).map(state_name).collect();
    states.push("stopped".into());

    let mut act1: Vec<String> = inputs.iter().map(|l| l.to_string()).collect();
    act1.extend(["observe".to_string(), "stop".to_string()]);
    let mut act2: Vec<String> = outputs.iter().map(|l| l.to_string()).collect();
    act2.push("nothing".to_string());

    let mut enabled1 = BTreeMap::new();
    let mut enabled2 = BTreeMap::new();
    let mut moves: Vec<RawMove> = Vec::new();
    let mut push = |from: String, a1: &str, a2: &str, to: Vec<String>| {
        moves.push(RawMove {
            from,
            a1: a1.to_string(),
            a2: a2.to_string(),
            to,
        });
    };
    for s in 0..lts.n_states {
        let name = state_name(s);
        let en_in: Vec<&str> = inputs
            .iter()
            .copied()
            .filter(|l| succ.contains_key(&(s, l)))
            .collect();
        let en_out: Vec<&str> = outputs
            .iter()
            .copied()
            .filter(|l| succ.contains_key(&(s, l)))
            .collect();
        let targets = |label: &str| -> Vec<usize> { succ[&(s, label)].iter().copied().collect() };

        let mut menu1: Vec<String> = en_in.iter().map(|l| l.to_string()).collect();
        menu1.extend(["observe".to_string(), "stop".to_string()]);
        let mut menu2: Vec<String> = en_out.iter().map(|l| l.to_string()).collect();
        menu2.push("nothing".to_string());

        for &i in &en_in {
            push(
                name.clone(),
                i,
                "nothing",
                targets(i).into_iter().map(state_name).collect(),
            );
            for &o in &en_out {
                let both: BTreeSet<usize> =
                    targets(i).into_iter().chain(targets(o)).collect();
                push(
                    name.clone(),
                    i,
                    o,
                    both.into_iter().map(state_name).collect(),
                );
            }
        }
        for &o in &en_out {
            push(
                name.clone(),
                "observe",
                o,
                targets(o).into_iter().map(state_name).collect(),
            );
        }
        push(name.clone(), "observe", "nothing", vec![name.clone()]);
        for x in &menu2 {
            push(name.clone(), "stop", x, vec!["stopped".into()]);
        }

        enabled1.insert(name.clone(), menu1);
        enabled2.insert(name, menu2);
    }
    enabled1.insert("stopped".into(), vec!["stop".into()]);
    enabled2.insert("stopped".into(), vec!["nothing".into()]);
    push("stopped".into(), "stop", "nothing", vec!["stopped".into()]);

    let raw = RawGame {
        schema: "jokers.game.v1".into(),
        states,
        initial: state_name(lts.initial),
        act1,
        act2,
        enabled1,
        enabled2,
        moves,
        goals: vec![],
    };
    Ok(raw
        .compile()
        .expect("the translation produces a well-formed game by construction"))
}

/// The test strategy for driving `game` toward `goal`: the attractor
/// analysis with {goal} as the target, projected onto regular actions.
/// Positional and defined on every state that can reach the goal at all, so
/// an implementation answer that wrecks the hoped-for line simply continues
/// under the same table.
pub fn derive_test_strategy(
    game: &ConcurrentGame,
    goal: StateId,
) -> Result<PositionalStrategy, String> {
    let g = game.with_goals(BTreeSet::from([goal]));
    let ja = joker_attractor(&g, g.goals());
    if !ja.j_rank(g.initial()).is_finite() {
        return Err(format!(
            "goal {} is not reachable from {}",
            g.state_name(goal),
            g.state_name(g.initial())
        ));
    }
    Ok(joker_attractor_strategy(&ja).inspired())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TesterKind {
    Joker,
    Random,
}

impl fmt::Display for TesterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TesterKind::Joker => "joker",
            TesterKind::Random => "random",
        })
    }
}

/// Aggregate outcome of one batch of runs with one tester on one goal.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentStats {
    pub goal: String,
    pub kind: TesterKind,
    pub runs: u64,
    pub reached: u64,
    /// Mean moves to the goal over the reaching runs only.
    pub mean_steps: Option<f64>,
    pub seed: u64,
}

/// Mixes a campaign seed with a run index so each run gets an independent
/// generator and any run can be replayed alone.
pub fn run_seed(seed: u64, run: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(seed ^ mix(run.wrapping_add(0x9E37_79B9_7F4A_7C15)))
}

/// Run the derived tester and the random baseline against a simulated
/// impartial implementation (uniform outputs, uniform nondeterminism),
/// `runs` times each from the initial state.
///
/// The random baseline draws uniformly from the enabled tester actions
/// *except* `stop`: the comparison is about exploration, and a baseline
/// that can resign at random would measure stopping luck instead. Runs that
/// strand (the tester table has no entry because the goal became
/// unreachable) or hit the cap count as not reaching.
pub fn run_experiment(
    game: &ConcurrentGame,
    goal: StateId,
    runs: u64,
    seed: u64,
    step_cap: usize,
) -> (ExperimentStats, ExperimentStats) {
    let g = game.with_goals(BTreeSet::from([goal]));
    let ja = joker_attractor(&g, g.goals());
    let tester = joker_attractor_strategy(&ja).inspired();
    let stop = g.act1_id("stop");
    let support: BTreeMap<StateId, Vec<Act1Id>> = g
        .state_ids()
        .map(|q| {
            let pool = g
                .enabled1(q)
                .iter()
                .copied()
                .filter(|&a| Some(a) != stop)
                .collect();
            (q, pool)
        })
        .collect();

    let measure = |kind: TesterKind| {
        let mut reached = 0u64;
        let mut steps = 0u64;
        for run in 0..runs {
            let mut rng = ChaCha8Rng::seed_from_u64(run_seed(seed, run));
            let policy = match kind {
                TesterKind::Joker => P1Policy::Strategy(&tester),
                TesterKind::Random => P1Policy::Support(&support),
            };
            let rec = simulate_run(
                &g,
                policy,
                &P2Script::Uniform,
                &P3Script::Uniform,
                g.initial(),
                step_cap,
                &mut rng,
            );
            if let Cost::Fin(ix) = rec.play.win_index(g.goals()) {
                reached += 1;
                steps += ix;
            }
        }
        ExperimentStats {
            goal: g.state_name(goal).to_string(),
            kind,
            runs,
            reached,
            mean_steps: (reached > 0).then(|| steps as f64 / reached as f64),
            seed,
        }
    };
    (measure(TesterKind::Joker), measure(TesterKind::Random))
}

/// Render stats as CSV, one line per entry.
pub fn stats_csv(stats: &[ExperimentStats]) -> String {
    let mut out = String::from("goal,kind,runs,reached,mean_steps,seed\n");
    for s in stats {
        let mean = s
            .mean_steps
            .map_or("NA".to_string(), |m| format!("{m:.4}"));
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.goal, s.kind, s.runs, s.reached, mean, s.seed
        ));
    }
    out
}

/// One goal's Joker-versus-random comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub goal: String,
    pub runs: u64,
    pub joker_reached: u64,
    pub random_reached: u64,
    pub joker_mean_steps: Option<f64>,
    pub random_mean_steps: Option<f64>,
}

impl SummaryRow {
    /// How many times more moves random testing needs: `random / joker`
    /// mean steps. `None` when the derived tester never reached (nothing to
    /// compare against); infinite when only random came up empty.
    pub fn step_ratio(&self) -> Option<f64> {
        let j = self.joker_mean_steps?;
        Some(match self.random_mean_steps {
            Some(r) => r / j,
            None => f64::INFINITY,
        })
    }

    fn ratio_text(&self) -> String {
        match self.step_ratio() {
            None => "NA".into(),
            Some(r) if r.is_infinite() => "inf".into(),
            Some(r) => format!("{r:.2}"),
        }
    }
}

/// Fold per-run stats into one row per goal. Entries for the same goal and
/// kind are combined as if their runs had been one batch.
pub fn summarize(stats: &[ExperimentStats]) -> Vec<SummaryRow> {
    #[derive(Default)]
    struct Acc {
        runs: u64,
        reached: u64,
        steps: f64,
    }
    let mut by_goal: BTreeMap<&str, BTreeMap<TesterKind, Acc>> = BTreeMap::new();
    for s in stats {
        let acc = by_goal
            .entry(&s.goal)
            .or_default()
            .entry(s.kind)
            .or_default();
        acc.runs += s.runs;
        acc.reached += s.reached;
        acc.steps += s.mean_steps.unwrap_or(0.0) * s.reached as f64;
    }
    by_goal
        .into_iter()
        .map(|(goal, mut kinds)| {
            let joker = kinds.remove(&TesterKind::Joker).unwrap_or_default();
            let random = kinds.remove(&TesterKind::Random).unwrap_or_default();
            SummaryRow {
                goal: goal.to_string(),
                runs: joker.runs.max(random.runs),
                joker_reached: joker.reached,
                random_reached: random.reached,
                joker_mean_steps: (joker.reached > 0).then(|| joker.steps / joker.reached as f64),
                random_mean_steps: (random.reached > 0)
                    .then(|| random.steps / random.reached as f64),
            }
        })
        .collect()
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(
        "goal,runs,joker_reached,random_reached,joker_mean_steps,random_mean_steps,step_ratio\n",
    );
    let mean = |m: Option<f64>| m.map_or("NA".to_string(), |m| format!("{m:.4}"));
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.goal,
            r.runs,
            r.joker_reached,
            r.random_reached,
            mean(r.joker_mean_steps),
            mean(r.random_mean_steps),
            r.ratio_text()
        ));
    }
    out
}

/// A fixed-width human-readable table of the same rows.
pub fn summary_table(rows: &[SummaryRow]) -> String {
    let mut out = format!(
        "{:<10} {:>6} {:>12} {:>13} {:>11} {:>12} {:>7}\n",
        "goal", "runs", "joker_reach", "random_reach", "joker_mean", "random_mean", "ratio"
    );
    let mean = |m: Option<f64>| m.map_or("NA".to_string(), |m| format!("{m:.2}"));
    for r in rows {
        out.push_str(&format!(
            "{:<10} {:>6} {:>12} {:>13} {:>11} {:>12} {:>7}\n",
            r.goal,
            r.runs,
            r.joker_reached,
            r.random_reached,
            mean(r.joker_mean_steps),
            mean(r.random_mean_steps),
            r.ratio_text()
        ));
    }
    out
}
