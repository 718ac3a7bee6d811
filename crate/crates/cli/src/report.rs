use std::fmt::Write;

use pgt_core::strategy::SearchResult;
use pgt_core::theory::{Goal, TheoryContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Proved,
    /// Quickcheck found a counterexample to the theorem itself.
    Refuted(Vec<String>),
    NoProofFound,
    BudgetCut,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Proved => "proved",
            Status::Refuted(_) => "refuted-goal",
            Status::NoProofFound => "no-proof-found",
            Status::BudgetCut => "budget-cut",
        }
    }
}

/// Result of running one theorem.
pub struct GoalReport {
    pub name: String,
    pub statement: String,
    pub status: Status,
    pub script: Option<Vec<String>>,
    pub applications: usize,
    pub conjectures_generated: usize,
    pub conjectures_surviving: usize,
    pub seconds: f64,
}

impl GoalReport {
    pub fn new(ctx: &TheoryContext, g: &Goal, status: Status, r: &SearchResult) -> GoalReport {
        GoalReport {
            name: g.name.clone(),
            statement: ctx.print(&g.statement),
            status,
            script: r.script.clone(),
            applications: r.trace.stats.applications,
            conjectures_generated: r.trace.stats.conjectures_generated,
            conjectures_surviving: r.trace.stats.conjectures_surviving,
            seconds: r.elapsed.as_secs_f64(),
        }
    }

    /// Theorem header followed by the script, or by the status as a comment.
    pub fn stdout_text(&self) -> String {
        let mut out = format!("theorem {}: \"{}\"\n", self.name, self.statement);
        match (&self.status, &self.script) {
            (Status::Proved, Some(lines)) => {
                for l in lines {
                    let _ = writeln!(out, "  {l}");
                }
            }
            (Status::Refuted(cex), _) if !cex.is_empty() => {
                let _ = writeln!(out, "  (* {}: {} *)", self.status.as_str(), cex.join(", "));
            }
            (s, _) => {
                let _ = writeln!(out, "  (* {} *)", s.as_str());
            }
        }
        out.push('\n');
        out
    }

    pub fn stats_line(&self) -> String {
        format!(
            "{}: {} ({} applications, {} conjectures generated, {} kept, {:.3}s)",
            self.name,
            self.status.as_str(),
            self.applications,
            self.conjectures_generated,
            self.conjectures_surviving,
            self.seconds
        )
    }
}
