//! Strategy interpreter: lazy depth-first search over combinator trees,
//! with a recorded search tree and an independent script replayer.

pub mod ast;
mod replay;
mod trace;

pub use ast::Strategy;
pub use replay::{replay, ReplayError};
pub use trace::{export_dot, export_json, Outcome, SearchStats, SearchTrace, TraceNode};

use std::cell::{Cell, RefCell};
use std::time::{Duration, Instant};

use crate::conjecture::{conjecture_strategy, generalize_strategy, DEFAULT_MAX_CONJECTURES};
use crate::rewrite::DEFAULT_STEP_BUDGET;
use crate::tactics::{auto_tac, dynamic_induct_variants, fastforce_tac, induct, is_solved, quickcheck_filter, ProofState, QuickcheckConfig};
use crate::term::Term;
use crate::theory::TheoryContext;

/// Resource limits for one search.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchBudget {
    /// Maximum number of atomic strategy applications.
    pub max_nodes: usize,
    pub timeout: Duration,
    /// Rewrite steps per `normalize` call inside auto/fastforce.
    pub rewrite_steps: usize,
    pub quickcheck: QuickcheckConfig,
    pub max_conjectures: usize,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_nodes: 20_000,
            timeout: Duration::from_secs(60),
            rewrite_steps: DEFAULT_STEP_BUDGET,
            quickcheck: QuickcheckConfig::default(),
            max_conjectures: DEFAULT_MAX_CONJECTURES,
        }
    }
}

/// Outcome of `search`.
#[derive(Clone, Debug)]
pub struct SearchResult {
    /// Script of the first complete proof, ending in `done`.
    pub script: Option<Vec<String>>,
    pub trace: SearchTrace,
    pub elapsed: Duration,
}

impl SearchResult {
    pub fn budget_hit(&self) -> bool {
        self.trace.budget_hit
    }
}

type States<'a> = Box<dyn Iterator<Item = (usize, ProofState)> + 'a>;

/// Interpreter state shared by every lazily evaluated branch of one search.
pub struct Engine<'a> {
    ctx: &'a TheoryContext,
    budget: &'a SearchBudget,
    trace: RefCell<SearchTrace>,
    applications: Cell<usize>,
    start: Instant,
    cut: Cell<bool>,
}

impl<'a> Engine<'a> {
    pub fn new(ctx: &'a TheoryContext, budget: &'a SearchBudget, goal: &Term) -> Engine<'a> {
        Engine { ctx, budget, trace: RefCell::new(SearchTrace::new(ctx.print(goal))), applications: Cell::new(0), start: Instant::now(), cut: Cell::new(false) }
    }

    /// Number of atomic strategy applications so far.
    pub fn applications(&self) -> usize {
        self.applications.get()
    }

    pub fn into_trace(self) -> SearchTrace {
        let mut t = self.trace.into_inner();
        t.budget_hit = self.cut.get();
        t.stats.applications = self.applications.get();
        t
    }

    /// Lazy sequence of states produced by `strat` on `s`, each paired with
    /// the trace node that recorded it.
    pub fn interpret(&'a self, strat: &'a Strategy, node: usize, s: ProofState) -> States<'a> {
        match strat {
            Strategy::Thens(cs) => self.thens(cs, node, s),
            Strategy::Ors(cs) => Box::new(cs.iter().flat_map(move |c| self.interpret(c, node, s.clone()))),
            Strategy::Named(n) => match self.ctx.strategies.get(n) {
                Some(def) => self.interpret(def, node, s),
                None => Box::new(std::iter::empty()),
            },
            atomic => Box::new(self.apply_atomic(atomic, node, &s).into_iter()),
        }
    }

    fn thens(&'a self, cs: &'a [Strategy], node: usize, s: ProofState) -> States<'a> {
        match cs.split_first() {
            None => Box::new(std::iter::once((node, s))),
            Some((first, rest)) => Box::new(self.interpret(first, node, s).flat_map(move |(n, s2)| self.thens(rest, n, s2))),
        }
    }

    fn over_budget(&self) -> bool {
        self.applications.get() >= self.budget.max_nodes || self.start.elapsed() > self.budget.timeout
    }

    fn apply_atomic(&self, strat: &Strategy, node: usize, s: &ProofState) -> Vec<(usize, ProofState)> {
        let name = strat.atomic_name().unwrap_or("?");
        if self.cut.get() {
            return Vec::new();
        }
        if self.over_budget() {
            self.cut.set(true);
            self.trace.borrow_mut().add(node, name.to_string(), Outcome::BudgetCut, s.subgoals.len());
            return Vec::new();
        }
        self.applications.set(self.applications.get() + 1);
        let ctx = self.ctx;
        let steps = self.budget.rewrite_steps;
        let results: Vec<ProofState> = match strat {
            Strategy::Auto => auto_tac(ctx, s, steps).into_iter().collect(),
            Strategy::Fastforce => fastforce_tac(ctx, s, steps).into_iter().collect(),
            Strategy::IsSolved => is_solved(s).into_iter().collect(),
            Strategy::Quickcheck => quickcheck_filter(ctx, s, &self.budget.quickcheck).into_iter().collect(),
            Strategy::DynamicInduct => dynamic_induct_variants(ctx, s).iter().filter_map(|v| induct(ctx, &v.var, &v.arbitrary, s).ok()).collect(),
            Strategy::Conjecture | Strategy::Generalize => {
                let (states, set) = if matches!(strat, Strategy::Conjecture) {
                    conjecture_strategy(ctx, s, self.budget.max_conjectures)
                } else {
                    generalize_strategy(ctx, s, self.budget.max_conjectures)
                };
                let goal = s.subgoals.first().map(|g| ctx.print(g)).unwrap_or_default();
                self.trace.borrow_mut().record_conjectures(node, goal, ctx, &set);
                states
            }
            Strategy::Thens(_) | Strategy::Ors(_) | Strategy::Named(_) => unreachable!("not atomic"),
        };
        let mut trace = self.trace.borrow_mut();
        if results.is_empty() {
            let outcome = if matches!(strat, Strategy::Quickcheck) { Outcome::PrunedRefuted } else { Outcome::PrunedFailed };
            trace.add(node, name.to_string(), outcome, s.subgoals.len());
            return Vec::new();
        }
        results
            .into_iter()
            .map(|r| {
                let method = match strat {
                    Strategy::Quickcheck => "quickcheck".to_string(),
                    _ => r.script.last().cloned().unwrap_or_else(|| name.to_string()),
                };
                let outcome = if matches!(strat, Strategy::IsSolved) { Outcome::Solved } else { Outcome::Open };
                (trace.add(node, method, outcome, r.subgoals.len()), r)
            })
            .collect()
    }
}

/// Depth-first, left-to-right search for the first complete proof.
pub fn search(strat: &Strategy, goal: &Term, ctx: &TheoryContext, budget: &SearchBudget) -> SearchResult {
    let engine = Engine::new(ctx, budget, goal);
    let mut script = None;
    {
        let states = engine.interpret(strat, 0, ProofState::init(goal.clone()));
        for (node, s) in states {
            if s.is_complete() {
                let mut lines = s.script;
                let mut trace = engine.trace.borrow_mut();
                if lines.last().map(String::as_str) == Some("done") {
                    trace.nodes[node].outcome = Outcome::Solved;
                } else {
                    lines.push("done".into());
                    trace.add(node, "done".into(), Outcome::Solved, 0);
                }
                script = Some(lines);
                break;
            }
            if engine.cut.get() {
                break;
            }
        }
    }
    let elapsed = engine.start.elapsed();
    SearchResult { script, trace: engine.into_trace(), elapsed }
}
