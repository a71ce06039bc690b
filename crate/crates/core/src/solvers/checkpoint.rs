//! Plain-text checkpoints of solver state.
//!
//! ```text
//! iesl-checkpoint 1
//! solver iesl
//! game kuhn-2
//! shape <nodes> <infosets> <slots>
//! iteration 120
//! eps 0.05
//! lambda 0.1
//! weighting counterfactual    (rd only)
//! meta <key> <value>          (zero or more)
//! table scores
//! <player>\t<infoset key>\t<v0,v1,...>
//! ...
//! end
//! ```
//!
//! Floats are written in their shortest round-trip form, so a save/load cycle
//! reproduces the state bit for bit. Rows appear in infoset id order and are
//! checked against the tree's keys on load.

use std::fmt::Write as _;
use std::path::Path;

use super::{CfrState, FpState, IeslState, RdState, RdWeighting, ScoreParams, SolverKind, SolverState};
use crate::error::{Error, Result};
use crate::game::{BehavioralPolicy, GameTree, InfosetTable};

const MAGIC: &str = "iesl-checkpoint";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub game: String,
    pub state: SolverState,
    /// Free-form key/value pairs carried along for the caller.
    pub meta: Vec<(String, String)>,
}

impl Checkpoint {
    pub fn new(tree: &GameTree, state: SolverState) -> Self {
        Self { game: tree.name().to_string(), state, meta: Vec::new() }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_text(&self, tree: &GameTree) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC} {VERSION}");
        let _ = writeln!(s, "solver {}", self.state.kind());
        let _ = writeln!(s, "game {}", self.game);
        let _ = writeln!(s, "shape {}", shape(tree));
        let _ = writeln!(s, "iteration {}", self.state.iteration());
        if let Some(p) = self.state.params() {
            let _ = writeln!(s, "eps {}", p.eps);
            let _ = writeln!(s, "lambda {}", p.lambda);
        }
        if let SolverState::Rd(r) = &self.state {
            let _ = writeln!(s, "weighting {}", r.weighting.as_str());
        }
        for (k, v) in &self.meta {
            let _ = writeln!(s, "meta {k} {v}");
        }
        for (name, table) in tables(&self.state) {
            let _ = writeln!(s, "table {name}");
            for x in tree.infosets() {
                let row: Vec<String> = table.get(x.id).iter().map(f64::to_string).collect();
                let _ = writeln!(s, "{}\t{}\t{}", x.player, x.key, row.join(","));
            }
        }
        s.push_str("end\n");
        s
    }

    pub fn from_text(tree: &GameTree, text: &str) -> Result<Self> {
        let mut lines = text.lines().peekable();
        let mut next = |what: &str| -> Result<&str> {
            lines.next().ok_or_else(|| bad(format!("unexpected end of file, expected {what}")))
        };
        let header = next("header")?;
        if header != format!("{MAGIC} {VERSION}") {
            return Err(bad(format!("unsupported header `{header}`")));
        }
        let kind: SolverKind = field(next("solver")?, "solver")?.parse()?;
        let game = field(next("game")?, "game")?.to_string();
        if game != tree.name() {
            return Err(bad(format!("checkpoint is for `{game}`, tree is `{}`", tree.name())));
        }
        let saved_shape = field(next("shape")?, "shape")?;
        if saved_shape != shape(tree) {
            return Err(bad(format!("tree shape {saved_shape} does not match {}", shape(tree))));
        }
        let iteration: u64 = parse(field(next("iteration")?, "iteration")?)?;
        let params = match kind {
            SolverKind::Iesl | SolverKind::Rd => Some(ScoreParams {
                eps: parse(field(next("eps")?, "eps")?)?,
                lambda: parse(field(next("lambda")?, "lambda")?)?,
            }),
            _ => None,
        };
        let weighting: Option<RdWeighting> = match kind {
            SolverKind::Rd => Some(field(next("weighting")?, "weighting")?.parse()?),
            _ => None,
        };
        let mut meta = Vec::new();
        let mut tables: Vec<(String, InfosetTable)> = Vec::new();
        loop {
            let line = next("table or end")?;
            if line == "end" {
                break;
            }
            if let Some(rest) = line.strip_prefix("meta ") {
                let (k, v) = rest.split_once(' ').unwrap_or((rest, ""));
                meta.push((k.to_string(), v.to_string()));
                continue;
            }
            let name = field(line, "table")?.to_string();
            let mut values = Vec::with_capacity(tree.num_slots());
            for x in tree.infosets() {
                let row = next("table row")?;
                let mut parts = row.splitn(3, '\t');
                let (p, key, vals) = (parts.next(), parts.next(), parts.next());
                if p != Some(x.player.to_string().as_str()) || key != Some(x.key.as_str()) {
                    return Err(bad(format!("table {name}: row `{row}` does not match infoset `{}`", x.key)));
                }
                let before = values.len();
                for v in vals.unwrap_or("").split(',') {
                    values.push(parse::<f64>(v)?);
                }
                if values.len() - before != x.num_actions() {
                    return Err(bad(format!("table {name}: wrong row width for `{}`", x.key)));
                }
            }
            tables.push((name, InfosetTable::from_values(tree, values)?));
        }
        let mut take = |name: &str| -> Result<InfosetTable> {
            let i = tables
                .iter()
                .position(|(n, _)| n == name)
                .ok_or_else(|| bad(format!("missing table `{name}`")))?;
            Ok(tables.swap_remove(i).1)
        };
        let state = match kind {
            SolverKind::Iesl => SolverState::Iesl(IeslState::from_scores(params.unwrap(), iteration, take("scores")?)?),
            SolverKind::Rd => SolverState::Rd(RdState::from_parts(
                params.unwrap(),
                iteration,
                take("scores")?,
                take("policy_sum")?,
            )?
            .with_weighting(weighting.unwrap())),
            SolverKind::Cfr => {
                SolverState::Cfr(CfrState { iteration, regrets: take("regrets")?, average: take("average")? })
            }
            SolverKind::Fp => {
                let avg = BehavioralPolicy::from_table(tree, take("average")?)?;
                SolverState::Fp(FpState::from_average(iteration, avg))
            }
        };
        Ok(Self { game, state, meta })
    }

    pub fn save(&self, tree: &GameTree, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_text(tree))?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(tree: &GameTree, path: &Path) -> Result<Self> {
        Self::from_text(tree, &std::fs::read_to_string(path)?)
    }
}

fn tables(state: &SolverState) -> Vec<(&'static str, &InfosetTable)> {
    match state {
        SolverState::Iesl(s) => vec![("scores", &s.scores)],
        SolverState::Rd(s) => vec![("scores", &s.scores), ("policy_sum", &s.policy_sum)],
        SolverState::Cfr(s) => vec![("regrets", &s.regrets), ("average", &s.average)],
        SolverState::Fp(s) => vec![("average", s.average_policy().table())],
    }
}

fn shape(tree: &GameTree) -> String {
    format!("{} {} {}", tree.num_nodes(), tree.num_infosets(), tree.num_slots())
}

fn bad(msg: String) -> Error {
    Error::Checkpoint(msg)
}

fn field<'a>(line: &'a str, name: &str) -> Result<&'a str> {
    line.strip_prefix(name)
        .and_then(|r| r.strip_prefix(' '))
        .ok_or_else(|| bad(format!("expected `{name} ...`, found `{line}`")))
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| bad(format!("cannot parse `{s}`")))
}
