//! Named example groups with default characters.

use thiserror::Error;

use crate::words::{commutator, validate_character, Character, Presentation, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixtureError {
    #[error("unknown fixture `{0}` (known: bs:1:<n>, trefoil, klein, zn:<n>, f:<n>, f2xz, surface:<g>)")]
    Unknown(String),
    #[error("bad parameter in fixture `{0}`")]
    BadParameter(String),
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub presentation: Presentation,
    pub default_character: Character,
    /// Known facts about the group, appended to scan interpretations.
    pub notes: Vec<String>,
}

pub struct FixtureLibrary;

impl FixtureLibrary {
    pub const NAMES: [&'static str; 7] = ["bs:1:<n>", "trefoil", "klein", "zn:<n>", "f:<n>", "f2xz", "surface:<g>"];

    pub fn get(spec: &str) -> Result<Fixture, FixtureError> {
        let spec = spec.trim();
        let parts: Vec<&str> = spec.split(':').collect();
        let param = |s: &str, min: i64| -> Result<i64, FixtureError> {
            s.parse::<i64>()
                .ok()
                .filter(|&n| n >= min && n <= 64)
                .ok_or_else(|| FixtureError::BadParameter(spec.to_string()))
        };
        match parts.as_slice() {
            ["bs", "1", n] => {
                let n = s_param(n, spec)?;
                let mut letters = vec![2, 1, -2];
                let a = if n >= 0 { -1 } else { 1 };
                letters.extend(std::iter::repeat_n(a, n.unsigned_abs() as usize));
                let notes = if n.abs() >= 2 {
                    vec![format!(
                        "BS(1,{n}) is semi-fibred but not fibred: its twisted Alexander polynomials never vanish, \
                         yet ker phi is not finitely generated"
                    )]
                } else {
                    Vec::new()
                };
                fixture(spec, &["a", "t"], vec![Word::new(letters)], &[0, 1], notes)
            }
            ["trefoil"] => fixture(spec, &["x", "y"], vec![Word::new(vec![1, 2, 1, -2, -1, -2])], &[1, 1], vec![]),
            ["klein"] => fixture(spec, &["a", "t"], vec![Word::new(vec![2, 1, -2, 1])], &[0, 1], vec![]),
            ["f2xz"] => {
                let rels = vec![commutator(&Word::generator(1), &Word::generator(3)), commutator(&Word::generator(2), &Word::generator(3))];
                fixture(spec, &["a", "b", "z"], rels, &[0, 0, 1], vec![])
            }
            ["zn", n] => {
                let n = param(n, 1)? as usize;
                let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
                let mut rels = Vec::new();
                for i in 1..=n {
                    for j in i + 1..=n {
                        rels.push(commutator(&Word::generator(i), &Word::generator(j)));
                    }
                }
                fixture_owned(spec, names, rels, &first_coordinate(n), vec![])
            }
            ["f", n] => {
                let n = param(n, 1)? as usize;
                let names = (1..=n).map(|i| format!("x{i}")).collect();
                fixture_owned(spec, names, vec![], &first_coordinate(n), vec![])
            }
            ["surface", g] => {
                let g = param(g, 1)? as usize;
                let mut names = Vec::new();
                let mut rel = Word::empty();
                for i in 1..=g {
                    names.push(format!("a{i}"));
                    names.push(format!("b{i}"));
                    rel = rel.mul(&commutator(&Word::generator(2 * i - 1), &Word::generator(2 * i)));
                }
                fixture_owned(spec, names, vec![rel], &first_coordinate(2 * g), vec![])
            }
            _ => Err(FixtureError::Unknown(spec.to_string())),
        }
    }
}

fn s_param(s: &str, spec: &str) -> Result<i64, FixtureError> {
    s.parse::<i64>()
        .ok()
        .filter(|&n| n != 0 && n.abs() <= 64)
        .ok_or_else(|| FixtureError::BadParameter(spec.to_string()))
}

fn first_coordinate(n: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[0] = 1;
    v
}

fn fixture(spec: &str, names: &[&str], rels: Vec<Word>, values: &[i64], notes: Vec<String>) -> Result<Fixture, FixtureError> {
    fixture_owned(spec, names.iter().map(|s| s.to_string()).collect(), rels, values, notes)
}

fn fixture_owned(
    spec: &str,
    names: Vec<String>,
    rels: Vec<Word>,
    values: &[i64],
    notes: Vec<String>,
) -> Result<Fixture, FixtureError> {
    let presentation = Presentation::new(names, rels).expect("fixture presentations are valid");
    let default_character = validate_character(&presentation, values).expect("fixture characters are valid");
    Ok(Fixture { name: spec.to_string(), presentation, default_character, notes })
}
