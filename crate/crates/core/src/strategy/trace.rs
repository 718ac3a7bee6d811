use std::fmt::Write;

use serde::Serialize;

use crate::conjecture::{statement_text, ConjectureSet};
use crate::theory::TheoryContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Expanded,
    Solved,
    PrunedRefuted,
    PrunedFailed,
    BudgetCut,
    /// Produced but never expanded further.
    Open,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Expanded => "expanded",
            Outcome::Solved => "solved",
            Outcome::PrunedRefuted => "pruned-refuted",
            Outcome::PrunedFailed => "pruned-failed",
            Outcome::BudgetCut => "budget-cut",
            Outcome::Open => "open",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub method: String,
    pub outcome: Outcome,
    pub open_subgoals: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SearchStats {
    /// Atomic strategy applications.
    pub applications: usize,
    pub conjectures_generated: usize,
    pub conjectures_surviving: usize,
}

/// Candidate list of one conjecturing step, already printed.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureDump {
    pub node: usize,
    pub goal: String,
    pub lines: Vec<(String, String)>,
}

/// The search tree, in node-creation order; node 0 is the initial state.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchTrace {
    pub nodes: Vec<TraceNode>,
    pub budget_hit: bool,
    pub stats: SearchStats,
    pub conjectures: Vec<ConjectureDump>,
}

impl SearchTrace {
    pub fn new(goal: String) -> SearchTrace {
        SearchTrace {
            nodes: vec![TraceNode { id: 0, parent: None, method: goal, outcome: Outcome::Open, open_subgoals: 1 }],
            budget_hit: false,
            stats: SearchStats::default(),
            conjectures: Vec::new(),
        }
    }

    pub(crate) fn add(&mut self, parent: usize, method: String, outcome: Outcome, open_subgoals: usize) -> usize {
        let id = self.nodes.len();
        self.nodes[parent].outcome = Outcome::Expanded;
        self.nodes.push(TraceNode { id, parent: Some(parent), method, outcome, open_subgoals });
        id
    }

    pub(crate) fn record_conjectures(&mut self, node: usize, goal: String, ctx: &TheoryContext, set: &ConjectureSet) {
        self.stats.conjectures_generated += set.generated;
        self.stats.conjectures_surviving += set.candidates.len();
        let lines = set.candidates.iter().map(|c| (statement_text(ctx, c), c.provenance.to_string())).collect();
        self.conjectures.push(ConjectureDump { node, goal, lines });
    }

    pub fn children(&self, id: usize) -> impl Iterator<Item = &TraceNode> {
        self.nodes.iter().filter(move |n| n.parent == Some(id))
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.nodes.iter().filter(|n| n.outcome == outcome).count()
    }

    /// Conjecture candidates, one per line as `statement\t# provenance`,
    /// each run headed by the goal it was generated for.
    pub fn dump_conjectures(&self) -> String {
        let mut out = String::new();
        for d in &self.conjectures {
            let _ = writeln!(out, "(* node {}: {} *)", d.node, d.goal);
            for (stmt, prov) in &d.lines {
                let _ = writeln!(out, "{stmt}\t# {prov}");
            }
        }
        out
    }
}

#[derive(Serialize)]
struct JsonTrace<'t> {
    nodes: &'t [TraceNode],
    root: usize,
    budget_hit: bool,
    stats: &'t SearchStats,
}

pub fn export_json(trace: &SearchTrace) -> String {
    let doc = JsonTrace { nodes: &trace.nodes, root: 0, budget_hit: trace.budget_hit, stats: &trace.stats };
    let mut s = serde_json::to_string_pretty(&doc).expect("trace serializes");
    s.push('\n');
    s
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn style(o: Outcome) -> &'static str {
    match o {
        Outcome::Expanded => "solid",
        Outcome::Solved => "filled,bold\", fillcolor=\"palegreen",
        Outcome::PrunedRefuted => "filled\", fillcolor=\"lightcoral",
        Outcome::PrunedFailed => "filled\", fillcolor=\"lightgrey",
        Outcome::BudgetCut => "dashed\", color=\"orange",
        Outcome::Open => "dotted",
    }
}

pub fn export_dot(trace: &SearchTrace) -> String {
    let mut out = String::from("digraph search {\n  node [shape=box, fontname=\"monospace\"];\n");
    for n in &trace.nodes {
        let _ =
            writeln!(out, "  n{} [label=\"{}\\n{} ({} open)\", style=\"{}\"];", n.id, escape(&n.method), n.outcome.as_str(), n.open_subgoals, style(n.outcome));
    }
    for n in &trace.nodes {
        if let Some(p) = n.parent {
            let _ = writeln!(out, "  n{p} -> n{};", n.id);
        }
    }
    out.push_str("}\n");
    out
}
