//! MSO syntax, parsing, brute-force evaluation, characteristic sentences and
//! sampling.

pub mod chi;
pub mod eval;
pub mod formula;
pub mod parse;
pub mod sample;

pub use chi::{characteristic_sentence, characteristic_sentence_with_budget};
pub use eval::{evaluate, holds, Assignment, Compiled};
pub use formula::Formula;
pub use parse::{parse_formula, parse_formula_with};
pub use sample::{sample_corpus, sample_formula};
