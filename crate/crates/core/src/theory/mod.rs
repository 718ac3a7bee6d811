//! Theory files: syntax, parsing and elaboration into a checked context.

pub mod ast;
mod context;
mod elaborate;
pub mod parser;

pub use ast::{Loc, TheoryItem};
pub use context::{ConstInfo, ConstKind, CtorInfo, DatatypeInfo, Definition, Goal, Lemma, TheoryContext};
pub use elaborate::{check_refs, elaborate, elaborate_with, load_theory, ElabError};
pub use parser::{parse_strategy, parse_term, parse_theory, parse_type, SyntaxError};
