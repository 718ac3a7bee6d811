use std::fmt;

/// Combinator language for proof search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Strategy {
    /// Sequential composition over every resulting state.
    Thens(Vec<Strategy>),
    /// Ordered alternation, each branch on the original state.
    Ors(Vec<Strategy>),
    DynamicInduct,
    Auto,
    IsSolved,
    Fastforce,
    Quickcheck,
    Conjecture,
    Generalize,
    Named(String),
}

impl Strategy {
    /// Names referenced anywhere in this expression.
    pub fn references(&self) -> Vec<&str> {
        match self {
            Strategy::Named(n) => vec![n.as_str()],
            Strategy::Thens(cs) | Strategy::Ors(cs) => cs.iter().flat_map(Strategy::references).collect(),
            _ => Vec::new(),
        }
    }

    pub fn atomic_name(&self) -> Option<&'static str> {
        Some(match self {
            Strategy::DynamicInduct => "Dynamic (Induct)",
            Strategy::Auto => "Auto",
            Strategy::IsSolved => "IsSolved",
            Strategy::Fastforce => "Fastforce",
            Strategy::Quickcheck => "Quickcheck",
            Strategy::Conjecture => "Conjecture",
            Strategy::Generalize => "Generalize",
            _ => return None,
        })
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, kw: &str, cs: &[Strategy]| {
            write!(f, "{kw} [")?;
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]")
        };
        match self {
            Strategy::Thens(cs) => list(f, "Thens", cs),
            Strategy::Ors(cs) => list(f, "Ors", cs),
            Strategy::Named(n) => write!(f, "{n}"),
            atomic => write!(f, "{}", atomic.atomic_name().unwrap_or("?")),
        }
    }
}
