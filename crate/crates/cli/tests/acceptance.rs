//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use pgt_core::conjecture::conjectures;
use pgt_core::corpus;
use pgt_core::rewrite::{eval_ground, normalize};
use pgt_core::strategy::{replay, search, SearchBudget};
use pgt_core::tactics::{fastforce_tac, find_counterexample, induct, ProofState, QuickcheckConfig};
use pgt_core::term::{strip_goal, Term, Type};
use pgt_core::theory::{load_theory, parse_strategy, TheoryContext};

/// Wall-clock limit for the flagship proof with default budgets.
const FLAGSHIP_TIME_LIMIT: Duration = Duration::from_secs(10);
/// Cleaned candidate count for the flagship goal, fixed by the enumeration oracle.
const FLAGSHIP_SURVIVORS: usize = 49;
/// Generated states for the fastforce contract.
const FASTFORCE_CASES: u32 = 1_000;
/// Ground evaluation bounds: list length and element domain.
const EVAL_MAX_LEN: usize = 3;
const EVAL_ATOMS: usize = 2;
/// Quickcheck bounds for the refutation check.
const QC_MAX_LEN: usize = 2;
const QC_ATOMS: usize = 2;

const FLAGSHIP: &str = "itrev xs [] = rev xs";
const KEY_CONJECTURE: &str = "!!Nil. itrev xs Nil = rev xs @ Nil";
const NON_THEOREM: &str = "!!Nil. itrev xs Nil = Nil @ rev xs";
/// Expected method lines of the flagship script.
const EXPECTED_METHODS: [&str; 4] = ["subgoal_tac", "apply fastforce", "apply (induct xs)", "apply auto"];

const DIND: &str = "Thens [Dynamic (Induct), Auto, IsSolved]";

fn cdind() -> String {
    format!("Thens [Conjecture, Fastforce, Quickcheck, {DIND}]")
}

fn pgtlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgtlab")).args(args).output().unwrap()
}

fn theory_path(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/theories").join(name).to_string_lossy().into_owned()
}

fn itrev() -> TheoryContext {
    load_theory(corpus::ITREV, &SearchBudget::default()).unwrap()
}

fn read(ctx: &TheoryContext, s: &str) -> Term {
    ctx.read_term(s, &[]).unwrap()
}

type Verdict = Result<String, String>;
type Check = fn() -> Verdict;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn flagship_reproduction() -> Verdict {
    let ctx = itrev();
    let goal = read(&ctx, FLAGSHIP);
    let start = Instant::now();
    let r = search(&parse_strategy("CDInd").unwrap(), &goal, &ctx, &SearchBudget::default());
    let elapsed = start.elapsed();
    let script = r.script.ok_or("CDInd found no proof")?;
    ensure(script.len() == 5 && script[4] == "done", format!("unexpected script shape {script:?}"))?;
    let arg = script[0].strip_prefix("apply (subgoal_tac \"").and_then(|s| s.strip_suffix("\")")).ok_or(format!("first line {}", script[0]))?;
    let conj = ctx.read_term(arg, &goal.frees()).map_err(|e| e.to_string())?;
    ensure(conj == ctx.read_term(KEY_CONJECTURE, &goal.frees()).unwrap(), format!("conjecture {arg}"))?;
    ensure(script[0].contains(EXPECTED_METHODS[0]), "first method")?;
    ensure(script[1..4] == EXPECTED_METHODS[1..], format!("methods {:?}", &script[1..4]))?;
    ensure(elapsed < FLAGSHIP_TIME_LIMIT, format!("took {elapsed:?}"))?;
    let cli = pgtlab(&["prove", &theory_path("itrev.thy")]);
    ensure(cli.status.code() == Some(0), format!("cli exit {:?}", cli.status.code()))?;
    Ok(format!("script matches, {:.3}s (limit {}s)", elapsed.as_secs_f64(), FLAGSHIP_TIME_LIMIT.as_secs()))
}

fn negative_control() -> Verdict {
    let ctx = itrev();
    let r = search(&parse_strategy("DInd").unwrap(), &read(&ctx, FLAGSHIP), &ctx, &SearchBudget::default());
    ensure(r.script.is_none(), "DInd proved the flagship")?;
    let cli = pgtlab(&["prove", &theory_path("itrev.thy"), "--strategy-override", "DInd"]);
    ensure(cli.status.code() == Some(1), format!("cli exit {:?}", cli.status.code()))?;
    Ok("no proof, exit 1".into())
}

fn conjecture_witness() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("conjectures.txt");
    let cli = pgtlab(&["prove", &theory_path("itrev.thy"), "--dump-conjectures", dump.to_str().unwrap()]);
    ensure(cli.status.code() == Some(0), "flagship run failed")?;
    let text = std::fs::read_to_string(&dump).unwrap();
    let statements: Vec<&str> = text.lines().filter(|l| !l.starts_with("(*")).map(|l| l.split('\t').next().unwrap()).collect();
    for wanted in [KEY_CONJECTURE, NON_THEOREM] {
        ensure(statements.contains(&wanted), format!("dump lacks {wanted}"))?;
    }
    let ctx = itrev();
    let oracle = oracles::enumerate_conjectures(&ctx, FLAGSHIP).len();
    ensure(oracle == FLAGSHIP_SURVIVORS, format!("oracle count {oracle}"))?;
    ensure(statements.len() == FLAGSHIP_SURVIVORS, format!("dump count {}", statements.len()))?;
    Ok(format!("both conjectures present, {} candidates (oracle {oracle})", statements.len()))
}

fn quickcheck_refutation() -> Verdict {
    let ctx = itrev();
    let cfg = QuickcheckConfig { max_list_length: QC_MAX_LEN, element_domain_size: QC_ATOMS, ..QuickcheckConfig::default() };
    let goal = read(&ctx, FLAGSHIP);
    let bad = ctx.read_term(NON_THEOREM, &goal.frees()).unwrap();
    ensure(find_counterexample(&ctx, &bad, &cfg).is_some(), "non-theorem not refuted")?;
    let (mut agreed, mut untestable) = (0, 0);
    for c in conjectures(&ctx, &goal, 500).candidates {
        let lib = find_counterexample(&ctx, &c.statement, &cfg).is_some();
        match oracles::refuted(&c.statement, QC_MAX_LEN, QC_ATOMS) {
            Some(expected) => {
                ensure(lib == expected, format!("disagree on {}", ctx.print(&c.statement)))?;
                agreed += 1;
            }
            None => {
                let params = strip_goal(&c.statement).params;
                ensure(params.iter().any(|(_, t)| t.is_fun()), format!("outside the list model: {}", ctx.print(&c.statement)))?;
                ensure(!lib, format!("untestable candidate refuted: {}", ctx.print(&c.statement)))?;
                untestable += 1;
            }
        }
    }
    Ok(format!("{agreed} candidates agree, {untestable} quantify over functions and pass"))
}

/// States drawn from the flagship search: candidates, their insertions into
/// the goal, and induction cases.
fn state_pool(ctx: &TheoryContext) -> Vec<Term> {
    let goal = read(ctx, FLAGSHIP);
    let mut pool = vec![goal.clone()];
    for c in conjectures(ctx, &goal, 500).candidates {
        pool.push(Term::mk_imp(c.statement.clone(), goal.clone()));
        if let Ok(s) = induct(ctx, "xs", &[], &ProofState::init(c.statement.clone())) {
            pool.extend(s.subgoals);
        }
        pool.push(c.statement);
    }
    pool
}

fn fastforce_contract() -> Verdict {
    let ctx = itrev();
    let pool = state_pool(&ctx);
    let config = Config { cases: FASTFORCE_CASES, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let closed = std::cell::Cell::new(0usize);
    let picks = proptest::collection::vec(0..pool.len(), 1..5);
    let result = runner.run(&picks, |ix| {
        let s = ProofState { subgoals: ix.iter().map(|&i| pool[i].clone()).collect(), script: vec!["apply auto".into()] };
        if let Some(out) = fastforce_tac(&ctx, &s, 10_000) {
            closed.set(closed.get() + 1);
            prop_assert_eq!(&out.subgoals[..], &s.subgoals[1..]);
            prop_assert_eq!(&out.script[..s.script.len()], &s.script[..]);
            prop_assert_eq!(out.script.len(), s.script.len() + 1);
        }
        Ok(())
    });
    result.map_err(|e| e.to_string())?;
    Ok(format!("{FASTFORCE_CASES} states from a pool of {}, {} closed", pool.len(), closed.get()))
}

fn replay_soundness() -> Verdict {
    let b = SearchBudget::default();
    let (mut emitted, mut lemmas) = (0, 0);
    for (name, src) in corpus::ALL {
        // loading proves and replays every lemma
        let ctx = load_theory(src, &b).map_err(|e| format!("{name}: {e}"))?;
        lemmas += ctx.lemmas.len();
        for g in &ctx.goals {
            if let Some(script) = search(&g.strategy, &g.statement, &ctx, &b).script {
                replay(&script, &g.statement, &ctx, &b).map_err(|e| format!("{name} {}: {e}", g.name))?;
                emitted += 1;
            }
        }
        let code = pgtlab(&["prove", &theory_path(name)]).status.code();
        ensure(code != Some(3), format!("{name}: cli reported an unsound proof"))?;
    }
    Ok(format!("{emitted} theorem scripts and {lemmas} lemma scripts replay"))
}

fn evaluator_oracle() -> Verdict {
    let ctx = itrev();
    let rules = ctx.definition_rules(10_000);
    let lists = oracles::ground_lists(EVAL_MAX_LEN, EVAL_ATOMS);
    let lt = lists[0].type_hint();
    let c = |n: &str, arity: usize| Term::constant(n, Type::curried(vec![lt.clone(); arity], lt.clone()));
    let mut checked = 0;
    for xs in &lists {
        let mut terms = vec![Term::app(c("rev", 1), xs.clone())];
        for ys in &lists {
            terms.push(Term::apps(c("itrev", 2), [xs.clone(), ys.clone()]));
            terms.push(Term::apps(c("@", 2), [xs.clone(), ys.clone()]));
        }
        for t in terms {
            let (e, n) = (eval_ground(&ctx, &t).map_err(|e| e.to_string())?, normalize(&rules, &t).map_err(|e| e.to_string())?);
            ensure(e == n, format!("disagree on {}", ctx.print(&t)))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} ground terms, zero disagreements"))
}

fn composability() -> Verdict {
    let b = SearchBudget::default();
    let dind = parse_strategy(DIND).unwrap();
    let both = parse_strategy(&format!("Ors [{DIND}, {}]", cdind())).unwrap();
    let mut compared = 0;
    for (name, src) in corpus::ALL {
        let ctx = load_theory(src, &b).unwrap();
        let statements = ctx.lemmas.values().map(|l| (&l.name, &l.statement)).chain(ctx.goals.iter().map(|g| (&g.name, &g.statement)));
        for (goal_name, st) in statements {
            if let Some(script) = search(&dind, st, &ctx, &b).script {
                let ors = search(&both, st, &ctx, &b).script;
                ensure(ors.as_ref() == Some(&script), format!("{name} {goal_name}: {ors:?} vs {script:?}"))?;
                compared += 1;
            }
        }
    }
    let ctx = itrev();
    let goal = read(&ctx, FLAGSHIP);
    let cd = search(&parse_strategy(&cdind()).unwrap(), &goal, &ctx, &b).script;
    ensure(cd.is_some() && search(&both, &goal, &ctx, &b).script == cd, "flagship script differs from CDInd")?;
    Ok(format!("{compared} DInd-solvable statements keep their script, flagship uses CDInd"))
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str, extra: &[&str]| -> Vec<Vec<u8>> {
        let files: Vec<PathBuf> = ["json", "dot", "txt"].iter().map(|e| dir.path().join(format!("{tag}.{e}"))).collect();
        let mut args = vec!["example".to_string(), "itrev".into()];
        for (flag, f) in ["--trace-json", "--trace-dot", "--dump-conjectures"].iter().zip(&files) {
            args.push(flag.to_string());
            args.push(f.to_string_lossy().into_owned());
        }
        args.extend(extra.iter().map(|s| s.to_string()));
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = pgtlab(&argv);
        let mut bytes = vec![out.stdout];
        bytes.extend(files.iter().map(|f| std::fs::read(f).unwrap()));
        bytes
    };
    for (mode, extra) in [("exhaustive", vec![]), ("random", vec!["--qc-mode", "random", "--seed", "11"])] {
        let a = run(&format!("{mode}-a"), &extra);
        let b = run(&format!("{mode}-b"), &extra);
        ensure(a == b, format!("{mode} runs differ"))?;
    }
    let a = pgtlab(&["example", "nonthm", "--qc-mode", "random", "--seed", "3"]).stdout;
    ensure(a == pgtlab(&["example", "nonthm", "--qc-mode", "random", "--seed", "3"]).stdout, "seeded refutations differ")?;
    Ok("scripts, traces and dumps byte-identical".into())
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("flagship reproduction", flagship_reproduction),
        ("negative control", negative_control),
        ("conjecture-set witness", conjecture_witness),
        ("quickcheck refutation", quickcheck_refutation),
        ("fastforce contract", fastforce_contract),
        ("search/replay soundness", replay_soundness),
        ("evaluator oracle", evaluator_oracle),
        ("composability", composability),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match verdict {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(why) => {
                println!("criterion {} ({name}): FAIL: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
