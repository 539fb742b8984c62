//! Rank tables and strategy documents in the shapes the command line emits:
//! an aligned text table, CSV, and versioned JSON.
//!
//! Every renderer walks states in declaration order, so output is stable for
//! a given input file. Infinite ranks print as the literal `inf` in all
//! three formats.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::attractor::JokerAttractor;
use crate::cost::Cost;
use crate::game::ConcurrentGame;
use crate::joker::{JokerAction, PositionalStrategy};
use crate::prob::ProbJokerAttractor;

pub const RANKS_SCHEMA: &str = "jokers.ranks.v1";
pub const STRATEGY_SCHEMA: &str = "jokers.strategy.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// One solved state: attractor rank, Joker rank, and whether the state is a
/// Joker state. The `p*` fields are filled only for almost-sure runs.
#[derive(Clone, Debug, Serialize)]
pub struct RankRow {
    pub state: String,
    #[serde(rename = "aRank")]
    pub a_rank: Cost,
    #[serde(rename = "jRank")]
    pub j_rank: Cost,
    #[serde(rename = "jokerState")]
    pub joker_state: bool,
    #[serde(rename = "pJRank", skip_serializing_if = "Option::is_none")]
    pub pj_rank: Option<Cost>,
    #[serde(rename = "pJokerState", skip_serializing_if = "Option::is_none")]
    pub p_joker_state: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct RankTable {
    pub rows: Vec<RankRow>,
    pub almost_sure: bool,
}

/// Assemble the rank table for a solved game. Pass the probabilistic layers
/// to add the almost-sure columns.
pub fn rank_table(
    game: &ConcurrentGame,
    ja: &JokerAttractor,
    pja: Option<&ProbJokerAttractor>,
) -> RankTable {
    let rows = game
        .state_ids()
        .map(|q| RankRow {
            state: game.state_name(q).to_string(),
            a_rank: ja.a_rank(q),
            j_rank: ja.j_rank(q),
            joker_state: ja.is_joker_state(q),
            pj_rank: pja.map(|p| p.pj_rank(q)),
            p_joker_state: pja.map(|p| p.is_joker_state(q)),
        })
        .collect();
    RankTable {
        rows,
        almost_sure: pja.is_some(),
    }
}

impl RankTable {
    fn header(&self) -> Vec<&'static str> {
        let mut h = vec!["state", "aRank", "jRank", "jokerState"];
        if self.almost_sure {
            h.push("pJRank");
            h.push("pJokerState");
        }
        h
    }

    fn cells(&self, row: &RankRow) -> Vec<String> {
        let mut c = vec![
            row.state.clone(),
            row.a_rank.to_string(),
            row.j_rank.to_string(),
            row.joker_state.to_string(),
        ];
        if self.almost_sure {
            c.push(row.pj_rank.unwrap_or(Cost::Inf).to_string());
            c.push(row.p_joker_state.unwrap_or(false).to_string());
        }
        c
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    pub fn render_csv(&self) -> String {
        let mut out = self.header().join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&self.cells(row).join(","));
            out.push('\n');
        }
        out
    }

    pub fn render_table(&self) -> String {
        let header = self.header();
        let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
        let lines: Vec<Vec<String>> = self.rows.iter().map(|r| self.cells(r)).collect();
        for cells in &lines {
            for (w, cell) in widths.iter_mut().zip(cells) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let mut emit = |cells: &[String]| {
            let line: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        };
        emit(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
        for cells in &lines {
            emit(cells);
        }
        out
    }

    pub fn render_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema: &'static str,
            rows: &'a [RankRow],
        }
        let doc = Doc {
            schema: RANKS_SCHEMA,
            rows: &self.rows,
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("rank table serializes");
        out.push('\n');
        out
    }
}

/// A strategy choice as it appears in JSON: a bare action name for regular
/// moves, an `{a, x, to}` object for Jokers.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum ChoiceDoc {
    Regular(String),
    Joker { a: String, x: String, to: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct StrategyDoc {
    pub schema: &'static str,
    pub label: String,
    /// State name → chosen move, keyed by name (so ordering is lexicographic,
    /// not declaration order — JSON objects carry no row semantics anyway).
    pub choices: BTreeMap<String, ChoiceDoc>,
}

pub fn strategy_doc(game: &ConcurrentGame, strategy: &PositionalStrategy) -> StrategyDoc {
    let choices = strategy
        .choice
        .iter()
        .map(|(&q, action)| {
            let doc = match *action {
                JokerAction::Regular(a) => ChoiceDoc::Regular(game.act1_name(a).to_string()),
                JokerAction::Joker { a, x, to } => ChoiceDoc::Joker {
                    a: game.act1_name(a).to_string(),
                    x: game.act2_name(x).to_string(),
                    to: game.state_name(to).to_string(),
                },
            };
            (game.state_name(q).to_string(), doc)
        })
        .collect();
    StrategyDoc {
        schema: STRATEGY_SCHEMA,
        label: strategy.label.clone(),
        choices,
    }
}

impl StrategyDoc {
    pub fn render(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("strategy serializes");
        out.push('\n');
        out
    }
}
