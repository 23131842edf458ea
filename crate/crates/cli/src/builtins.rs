//! Problem files compiled into the binary.

use crate::commands::Verb;
use crate::error::{CliError, CliResult};
use crate::problem::ProblemFile;

/// `(name, verb it is meant for, file contents)`.
const BUILTINS: &[(&str, Verb, &str)] = &[
    ("constant", Verb::Solve, include_str!("../builtins/constant.json")),
    ("rotate-i", Verb::Solve, include_str!("../builtins/rotate-i.json")),
    ("smooth", Verb::Solve, include_str!("../builtins/smooth.json")),
    ("two-jump", Verb::Solve, include_str!("../builtins/two-jump.json")),
    (
        "jordan-rotate-i",
        Verb::Solve,
        include_str!("../builtins/jordan-rotate-i.json"),
    ),
    (
        "cos-dirichlet",
        Verb::Dirichlet,
        include_str!("../builtins/cos-dirichlet.json"),
    ),
    (
        "square-wave",
        Verb::Dirichlet,
        include_str!("../builtins/square-wave.json"),
    ),
    ("zero", Verb::Dirichlet, include_str!("../builtins/zero.json")),
    (
        "nullspace-8",
        Verb::Nullspace,
        include_str!("../builtins/nullspace-8.json"),
    ),
    ("hmeasure", Verb::Hmeasure, include_str!("../builtins/hmeasure.json")),
    (
        "hmeasure-polynomial",
        Verb::Hmeasure,
        include_str!("../builtins/hmeasure-polynomial.json"),
    ),
    ("theodorsen", Verb::Map, include_str!("../builtins/theodorsen.json")),
    ("hexagon", Verb::Map, include_str!("../builtins/hexagon.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|b| b.0)
}

/// Every builtin with the verb it is meant for.
pub fn catalog() -> impl Iterator<Item = (&'static str, Verb)> {
    BUILTINS.iter().map(|b| (b.0, b.1))
}

pub fn verb(name: &str) -> Option<Verb> {
    BUILTINS.iter().find(|b| b.0 == name).map(|b| b.1)
}

pub fn source(name: &str) -> CliResult<&'static str> {
    BUILTINS.iter().find(|b| b.0 == name).map(|b| b.2).ok_or_else(|| {
        let known: Vec<_> = names().collect();
        CliError::schema(format!("unknown builtin '{name}' (known: {})", known.join(", ")))
    })
}

pub fn load(name: &str) -> CliResult<ProblemFile> {
    ProblemFile::from_json(source(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_parses_and_is_named_after_itself() {
        for (name, _) in catalog() {
            let p = load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(p.name, name);
            p.data_specs().unwrap();
        }
    }

    #[test]
    fn unknown_names_are_schema_errors() {
        assert_eq!(load("nope").unwrap_err().exit_code(), crate::error::exit::SCHEMA);
        assert_eq!(verb("nullspace-8"), Some(Verb::Nullspace));
    }
}
