//! The two example systems shipped with the crate.

use crate::format::{parse_model, Model};
use crate::models::Cts;

pub const EX1_TEXT: &str = include_str!("../fixtures/ex1.cts");
pub const EX2_TEXT: &str = include_str!("../fixtures/ex2.cts");

fn load(text: &str) -> Cts {
    match parse_model(text, false).expect("bundled fixture parses") {
        Model::Cts(m) => m,
        Model::Lats(_) => unreachable!("bundled fixtures are conditional systems"),
    }
}

/// Six states, one action, conditions `phi' <= phi`.
pub fn ex1() -> Cts {
    load(EX1_TEXT)
}

/// Two states where only `x2` moves, and only after the upgrade to `phi'`.
pub fn ex2() -> Cts {
    load(EX2_TEXT)
}
