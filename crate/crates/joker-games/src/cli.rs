//! The `jokers` command line: one entry point wiring validation, solving,
//! strategy synthesis, oracle cross-checks, simulation, and the
//! model-based-testing pipeline.
//!
//! Exit codes: 0 on success, 1 when an oracle check reports a violation,
//! 2 on input errors (unknown flags, unreadable files, schema violations).
//! Every stochastic subcommand requires an explicit `--seed`; there is no
//! time-based default, so identical invocations produce identical bytes.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::attractor::{joker_attractor, JokerAttractor};
use crate::cost::Cost;
use crate::format;
use crate::game::ConcurrentGame;
use crate::mbt;
use crate::oracle;
use crate::prob::p_joker_attractor;
use crate::report;
use crate::sim::{simulate_run, P1Policy, P2Script, P3Script};
use crate::strategy::{distances, joker_attractor_strategy, short_joker_strategy};

#[derive(Parser)]
#[command(
    name = "jokers",
    version,
    about = "Solve concurrent reachability games with Joker moves",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a game file against the schema rules and report every problem.
    Validate(ValidateArgs),
    /// Compute attractor and Joker ranks for every state.
    Solve(SolveArgs),
    /// Synthesize a positional strategy and emit it as JSON.
    Strategy(StrategyArgs),
    /// Cross-check solver output against brute-force oracles.
    Oracle(OracleArgs),
    /// Play seeded runs of a strategy against randomized opponents.
    Simulate(SimulateArgs),
    /// Model-based testing: derive games from labelled transition systems.
    #[command(subcommand)]
    Mbt(MbtCommand),
}

#[derive(Args)]
struct GameArg {
    /// Path to a game file (jokers.game.v1 JSON).
    #[arg(long, value_name = "FILE")]
    game: PathBuf,
    /// Replace the file's goal set: comma-separated state names.
    #[arg(
        long,
        visible_alias = "goal-set",
        value_delimiter = ',',
        value_name = "STATES"
    )]
    goals: Option<Vec<String>>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Path to the game file to check.
    #[arg(long, value_name = "FILE")]
    game: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    game: GameArg,
    /// Also solve the almost-sure variant; adds pJRank and pJokerState
    /// columns to the rank table.
    #[arg(long)]
    almost_sure: bool,
    /// Output shape.
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    /// Write the table here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StrategyArgs {
    #[command(flatten)]
    game: GameArg,
    /// Which synthesis to run.
    #[arg(long, value_enum)]
    kind: StrategyKind,
    /// Write the strategy JSON here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyKind {
    /// Layer-by-layer attractor strategy: spends exactly jRank Jokers.
    Attractor,
    /// Distance-minimizing variant: same Joker bill, fewest moves.
    Short,
    /// The attractor strategy with Jokers flattened to plain hoped-for
    /// actions (the shape a tester can actually play).
    Inspired,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    game: GameArg,
    /// Which cross-check to run.
    #[arg(long, value_enum)]
    check: OracleCheck,
    /// Refuse adversary enumeration beyond this many positional pairs.
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    max_pairs: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OracleCheck {
    /// Value iteration must reproduce the Joker ranks pointwise.
    Value,
    /// Every outcome of the attractor strategy from a winnable state must
    /// spend exactly jRank Jokers.
    ExactJokers,
    /// Finite rank must coincide with plain graph reachability of the goals.
    Determinacy,
    /// Budgeted cooperative search must reproduce the distance table.
    Shortest,
    /// Attractor and short strategies must beat identical opponent sets.
    Dominance,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    game: GameArg,
    /// Player 1 behaviour for the runs.
    #[arg(long, value_enum, default_value_t = SimKind::Attractor)]
    kind: SimKind,
    /// Number of independent runs.
    #[arg(long, default_value_t = 1)]
    runs: u64,
    /// RNG seed (required: runs are reproducible, never time-seeded).
    #[arg(long)]
    seed: u64,
    /// Start state (default: the file's initial state).
    #[arg(long, value_name = "STATE")]
    start: Option<String>,
    /// Abort a run after this many steps (default: 10x the state count).
    #[arg(long, value_name = "N")]
    step_cap: Option<usize>,
    /// Output shape: csv lists one row per run, table/json summarize.
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    /// Write here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SimKind {
    /// Follow the Joker attractor strategy.
    Attractor,
    /// Follow the move-minimizing strategy.
    Short,
    /// Follow the Joker-inspired plain strategy (no Jokers played).
    Inspired,
    /// Pick uniformly among enabled regular actions.
    Random,
}

#[derive(Subcommand)]
enum MbtCommand {
    /// Translate a labelled transition system (.aut) into a testing game.
    Gen(MbtGenArgs),
    /// Run a derived-tester vs random-tester campaign for one goal.
    Run(MbtRunArgs),
}

#[derive(Args)]
struct MbtGenArgs {
    /// Aldebaran-style .aut file; labels end in `?` (input) or `!` (output).
    #[arg(long, value_name = "FILE")]
    lts: PathBuf,
    /// Where the generated game JSON goes.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct MbtRunArgs {
    /// Path to a game produced by `mbt gen`.
    #[arg(long, value_name = "FILE")]
    game: PathBuf,
    /// Goal state name the testers try to reach.
    #[arg(long, value_name = "STATE")]
    goal: String,
    /// Runs per tester kind.
    #[arg(long, default_value_t = 1000)]
    runs: u64,
    /// RNG seed (required: campaigns are reproducible, never time-seeded).
    #[arg(long)]
    seed: u64,
    /// Write the per-kind statistics CSV here; stdout then shows a summary
    /// table. Without it the CSV itself goes to stdout.
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
    /// Abort a run after this many steps (default: 10x the state count).
    #[arg(long, value_name = "N")]
    step_cap: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Csv,
    Json,
}

impl From<OutputFormat> for report::Format {
    fn from(f: OutputFormat) -> report::Format {
        match f {
            OutputFormat::Table => report::Format::Table,
            OutputFormat::Csv => report::Format::Csv,
            OutputFormat::Json => report::Format::Json,
        }
    }
}

/// An input problem past argument parsing: unreadable or malformed file,
/// unknown state name, oversized enumeration. Always exits 2. (Violation
/// verdicts travel on [`CmdOutput`] instead — the report is still emitted.)
#[derive(Debug)]
struct Failure(String);

/// A finished command: rendered text, optional file destination, and an
/// optional violation verdict (emitted after the text is written).
struct CmdOutput {
    text: String,
    out: Option<PathBuf>,
    violation: Option<String>,
}

impl CmdOutput {
    fn stdout(text: String) -> CmdOutput {
        CmdOutput {
            text,
            out: None,
            violation: None,
        }
    }
}

impl GameArg {
    fn load(&self) -> Result<ConcurrentGame, Failure> {
        let game = format::load_game(&self.game).map_err(|e| Failure(e.to_string()))?;
        match &self.goals {
            None => Ok(game),
            Some(names) => {
                let mut goals = BTreeSet::new();
                for name in names {
                    let q = game.state_id(name).ok_or_else(|| {
                        Failure(format!("unknown goal state \"{name}\""))
                    })?;
                    goals.insert(q);
                }
                Ok(game.with_goals(goals))
            }
        }
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(args) => run_validate(&args),
        Command::Solve(args) => run_solve(&args),
        Command::Strategy(args) => run_strategy(&args),
        Command::Oracle(args) => run_oracle(&args),
        Command::Simulate(args) => run_simulate(&args),
        Command::Mbt(MbtCommand::Gen(args)) => run_mbt_gen(&args),
        Command::Mbt(MbtCommand::Run(args)) => run_mbt_run(&args),
    };
    let output = match result {
        Ok(output) => output,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    match &output.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &output.text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{}", output.text),
    }
    match output.violation {
        Some(msg) => {
            eprintln!("{msg}");
            1
        }
        None => 0,
    }
}

fn run_validate(args: &ValidateArgs) -> Result<CmdOutput, Failure> {
    let game = format::load_game(&args.game).map_err(|e| Failure(e.to_string()))?;
    let moves: usize = game
        .state_ids()
        .map(|q| {
            game.enabled1(q)
                .iter()
                .map(|&a| {
                    game.enabled2(q)
                        .iter()
                        .map(|&x| game.moves(q, a, x).len())
                        .sum::<usize>()
                })
                .sum::<usize>()
        })
        .sum();
    Ok(CmdOutput::stdout(format!(
        "ok: {} states, {} + {} actions, {} move targets, {} goal(s)\n",
        game.n_states(),
        game.act1_names().len(),
        game.act2_names().len(),
        moves,
        game.goals().len(),
    )))
}

fn run_solve(args: &SolveArgs) -> Result<CmdOutput, Failure> {
    let game = args.game.load()?;
    let ja = joker_attractor(&game, game.goals());
    let pja = args
        .almost_sure
        .then(|| p_joker_attractor(&game, game.goals()));
    let table = report::rank_table(&game, &ja, pja.as_ref());
    Ok(CmdOutput {
        text: table.render(args.format.into()),
        out: args.out.clone(),
        violation: None,
    })
}

fn run_strategy(args: &StrategyArgs) -> Result<CmdOutput, Failure> {
    let game = args.game.load()?;
    let ja = joker_attractor(&game, game.goals());
    let strategy = match args.kind {
        StrategyKind::Attractor => joker_attractor_strategy(&ja),
        StrategyKind::Short => short_joker_strategy(&game, &ja),
        StrategyKind::Inspired => joker_attractor_strategy(&ja).inspired(),
    };
    Ok(CmdOutput {
        text: report::strategy_doc(&game, &strategy).render(),
        out: args.out.clone(),
        violation: None,
    })
}

fn run_oracle(args: &OracleArgs) -> Result<CmdOutput, Failure> {
    let game = args.game.load()?;
    let ja = joker_attractor(&game, game.goals());
    let check_name = match args.check {
        OracleCheck::Value => "value",
        OracleCheck::ExactJokers => "exact-jokers",
        OracleCheck::Determinacy => "determinacy",
        OracleCheck::Shortest => "shortest",
        OracleCheck::Dominance => "dominance",
    };
    let (violations, detail) = match args.check {
        OracleCheck::Value => check_value(&game, &ja),
        OracleCheck::ExactJokers => check_exact_jokers(&game, &ja),
        OracleCheck::Determinacy => check_determinacy(&game, &ja),
        OracleCheck::Shortest => check_shortest(&game, &ja),
        OracleCheck::Dominance => check_dominance(&game, &ja, u128::from(args.max_pairs))?,
    };
    let ok = violations.is_empty();
    let report = json!({
        "schema": "jokers.oracle.v1",
        "check": check_name,
        "game": args.game.game.display().to_string(),
        "ok": ok,
        "violations": violations,
        "detail": detail,
    });
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    Ok(CmdOutput {
        text,
        out: args.out.clone(),
        violation: (!ok).then(|| {
            format!(
                "oracle {}: {} violation(s)",
                check_name,
                report["violations"].as_array().map_or(0, Vec::len)
            )
        }),
    })
}

fn check_value(
    game: &ConcurrentGame,
    ja: &JokerAttractor,
) -> (Vec<serde_json::Value>, serde_json::Value) {
    let vt = oracle::value_iterate(game);
    let violations = game
        .state_ids()
        .filter(|&q| vt.v(q) != ja.j_rank(q))
        .map(|q| {
            json!({
                "state": game.state_name(q),
                "value": vt.v(q),
                "jRank": ja.j_rank(q),
            })
        })
        .collect();
    (violations, json!({ "iterations": vt.iterations }))
}

fn check_exact_jokers(
    game: &ConcurrentGame,
    ja: &JokerAttractor,
) -> (Vec<serde_json::Value>, serde_json::Value) {
    let strategy = joker_attractor_strategy(ja);
    let violations = oracle::exact_spend_violations(game, ja, &strategy)
        .into_iter()
        .map(serde_json::Value::from)
        .collect();
    (violations, json!({ "members": ja.members().len() }))
}

fn check_determinacy(
    game: &ConcurrentGame,
    ja: &JokerAttractor,
) -> (Vec<serde_json::Value>, serde_json::Value) {
    let violations = oracle::determinacy_violations(game, ja)
        .into_iter()
        .map(|q| serde_json::Value::from(game.state_name(q)))
        .collect();
    (
        violations,
        json!({ "members": ja.members().len(), "states": game.n_states() }),
    )
}

fn check_shortest(
    game: &ConcurrentGame,
    ja: &JokerAttractor,
) -> (Vec<serde_json::Value>, serde_json::Value) {
    let dt = distances(game, ja);
    let mut violations = Vec::new();
    for &q in ja.members() {
        let Cost::Fin(budget) = ja.j_rank(q) else {
            continue;
        };
        let bfs = oracle::cooperative_shortest(game, ja, q, budget);
        if bfs != dt.d[q.0] {
            violations.push(json!({
                "state": game.state_name(q),
                "budget": budget,
                "search": bfs,
                "table": dt.d[q.0],
            }));
        }
    }
    (violations, json!({ "members": ja.members().len() }))
}

fn check_dominance(
    game: &ConcurrentGame,
    ja: &JokerAttractor,
    max_pairs: u128,
) -> Result<(Vec<serde_json::Value>, serde_json::Value), Failure> {
    let family = oracle::enumerate_adversaries(game, max_pairs).map_err(Failure)?;
    let pairs: Vec<_> = family.pairs().collect();
    let left = joker_attractor_strategy(ja);
    let right = short_joker_strategy(game, ja);
    let report = oracle::dominance_compare(
        game,
        &left,
        &right,
        &pairs,
        game.initial(),
        10 * game.n_states() + 10,
    );
    let verdict = match report.verdict {
        oracle::DominanceVerdict::LeftDominates => "left-dominates",
        oracle::DominanceVerdict::RightDominates => "right-dominates",
        oracle::DominanceVerdict::Even => "even",
        oracle::DominanceVerdict::Incomparable => "incomparable",
    };
    // Two surely-winning strategies must beat exactly the same opponents
    // from any start; anything but an even verdict is a finding.
    let violations = if report.verdict == oracle::DominanceVerdict::Even {
        Vec::new()
    } else {
        vec![json!({
            "start": game.state_name(game.initial()),
            "verdict": verdict,
        })]
    };
    let detail = json!({
        "left": left.label,
        "right": right.label,
        "pairs": pairs.len(),
        "verdict": verdict,
        "leftWins": report.left_wins.len(),
        "rightWins": report.right_wins.len(),
    });
    Ok((violations, detail))
}

fn run_simulate(args: &SimulateArgs) -> Result<CmdOutput, Failure> {
    let game = args.game.load()?;
    let start = match &args.start {
        Some(name) => game
            .state_id(name)
            .ok_or_else(|| Failure(format!("unknown start state \"{name}\"")))?,
        None => game.initial(),
    };
    let ja = joker_attractor(&game, game.goals());
    let strategy = match args.kind {
        SimKind::Attractor => Some(joker_attractor_strategy(&ja)),
        SimKind::Short => Some(short_joker_strategy(&game, &ja)),
        SimKind::Inspired => Some(joker_attractor_strategy(&ja).inspired()),
        SimKind::Random => None,
    };
    let cap = args.step_cap.unwrap_or(10 * game.n_states());
    let kind_name = match args.kind {
        SimKind::Attractor => "attractor",
        SimKind::Short => "short",
        SimKind::Inspired => "inspired",
        SimKind::Random => "random",
    };

    struct Row {
        reached: bool,
        steps: usize,
        jokers: Option<u64>,
        end: String,
    }
    let mut rows = Vec::new();
    for run in 0..args.runs {
        let mut rng = ChaCha8Rng::seed_from_u64(mbt::run_seed(args.seed, run));
        let policy = match &strategy {
            Some(s) => P1Policy::Strategy(s),
            None => P1Policy::Uniform,
        };
        let rec = simulate_run(
            &game,
            policy,
            &P2Script::Uniform,
            &P3Script::Uniform,
            start,
            cap,
            &mut rng,
        );
        rows.push(Row {
            reached: rec.reached(&game),
            steps: rec.steps(),
            jokers: rec.jokers_spent(&game),
            end: game.state_name(rec.end()).to_string(),
        });
    }

    let reached = rows.iter().filter(|r| r.reached).count();
    let mean_steps = (reached > 0).then(|| {
        let total: usize = rows.iter().filter(|r| r.reached).map(|r| r.steps).sum();
        total as f64 / reached as f64
    });
    let spent: Vec<u64> = rows.iter().filter_map(|r| r.jokers).collect();

    let text = match args.format {
        OutputFormat::Csv => {
            let mut out = String::from("run,reached,steps,jokers,end\n");
            for (i, r) in rows.iter().enumerate() {
                let jokers = r.jokers.map_or("NA".to_string(), |j| j.to_string());
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    i, r.reached, r.steps, jokers, r.end
                ));
            }
            out
        }
        OutputFormat::Table => {
            let mean = mean_steps.map_or("NA".to_string(), |m| format!("{m:.4}"));
            let (lo, hi) = match (spent.iter().min(), spent.iter().max()) {
                (Some(lo), Some(hi)) => (lo.to_string(), hi.to_string()),
                _ => ("NA".to_string(), "NA".to_string()),
            };
            format!(
                "kind        {kind_name}\n\
                 start       {}\n\
                 seed        {}\n\
                 runs        {}\n\
                 reached     {reached}\n\
                 mean_steps  {mean}\n\
                 jokers      {lo}..{hi}\n",
                game.state_name(start),
                args.seed,
                args.runs,
            )
        }
        OutputFormat::Json => {
            let records: Vec<_> = rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    json!({
                        "run": i,
                        "reached": r.reached,
                        "steps": r.steps,
                        "jokers": r.jokers,
                        "end": r.end,
                    })
                })
                .collect();
            let doc = json!({
                "schema": "jokers.sim.v1",
                "kind": kind_name,
                "start": game.state_name(start),
                "seed": args.seed,
                "runs": args.runs,
                "reached": reached,
                "meanSteps": mean_steps,
                "minJokers": spent.iter().min(),
                "maxJokers": spent.iter().max(),
                "records": records,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("summary serializes");
            s.push('\n');
            s
        }
    };
    Ok(CmdOutput {
        text,
        out: args.out.clone(),
        violation: None,
    })
}

fn run_mbt_gen(args: &MbtGenArgs) -> Result<CmdOutput, Failure> {
    let text = fs::read_to_string(&args.lts)
        .map_err(|e| Failure(format!("cannot read {}: {e}", args.lts.display())))?;
    let lts = mbt::parse_aut(&text).map_err(Failure)?;
    let game = mbt::lts_to_game(&lts).map_err(Failure)?;
    fs::write(&args.out, format::to_json(&game))
        .map_err(|e| Failure(format!("cannot write {}: {e}", args.out.display())))?;
    Ok(CmdOutput::stdout(format!(
        "wrote {} ({} states, {} transitions -> {} game states)\n",
        args.out.display(),
        lts.n_states,
        lts.transitions.len(),
        game.n_states(),
    )))
}

fn run_mbt_run(args: &MbtRunArgs) -> Result<CmdOutput, Failure> {
    let game = format::load_game(&args.game).map_err(|e| Failure(e.to_string()))?;
    let goal = game
        .state_id(&args.goal)
        .ok_or_else(|| Failure(format!("unknown goal state \"{}\"", args.goal)))?;
    let cap = args.step_cap.unwrap_or(10 * game.n_states());
    let (joker, random) = mbt::run_experiment(&game, goal, args.runs, args.seed, cap);
    let stats = [joker, random];
    let csv = mbt::stats_csv(&stats);
    match &args.csv {
        Some(path) => {
            fs::write(path, &csv)
                .map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?;
            let summary = mbt::summarize(&stats);
            Ok(CmdOutput::stdout(mbt::summary_table(&summary)))
        }
        None => Ok(CmdOutput::stdout(csv)),
    }
}
