//! Free-group words, finite presentations and integer characters.
//!
//! A [`Word`] is a sequence of signed 1-based generator indices: `3` is the
//! third generator and `-3` its inverse. Presentations keep their relators
//! freely reduced, and drop relators that reduce to the empty word.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Element of the free group on `g` generators, stored letter by letter.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<i32>,
}

impl Word {
    pub fn new(letters: Vec<i32>) -> Self {
        debug_assert!(letters.iter().all(|&l| l != 0));
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    /// The single letter `x_i` (1-based).
    pub fn generator(i: usize) -> Self {
        Word::new(vec![i as i32])
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index mentioned, or 0 for the empty word.
    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word::new(self.letters.iter().rev().map(|&l| -l).collect())
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word::new(out)
    }

    /// `self^k`, freely reduced; negative `k` powers the inverse.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { free_reduce(self) };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != -w[1])
    }

    /// Exponent sum of each generator, indexed 0..g.
    pub fn exponent_sums(&self, generator_count: usize) -> Vec<i64> {
        let mut sums = vec![0i64; generator_count];
        for &l in &self.letters {
            sums[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        sums
    }
}

/// Cancels adjacent `x x^-1` pairs until none remain.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &l in w.letters() {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word::new(out)
}

/// Commutator `[u, v] = u v u^-1 v^-1`.
pub fn commutator(u: &Word, v: &Word) -> Word {
    u.mul(v).mul(&u.inverse()).mul(&v.inverse())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: unknown generator `{name}`")]
    UnknownGenerator { line: usize, column: usize, name: String },
    #[error("presentation has no generators")]
    NoGenerators,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("generator index {index} out of range for {count} generators")]
    GeneratorOutOfRange { index: i32, count: usize },
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("presentation has no generators")]
    NoGenerators,
    #[error("expected {expected} character values, got {got}")]
    CharacterLength { expected: usize, got: usize },
    #[error("not a homomorphism: relator {index} (`{relator}`) has weighted exponent sum {sum}")]
    NotAHomomorphism { index: usize, relator: String, sum: i64 },
    #[error("malformed Tietze recipe: {0}")]
    MalformedRecipe(String),
}

/// A finite presentation `<x_1, ..., x_g | r_1, ..., r_s>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    /// Builds a presentation, reducing relators and dropping trivial ones.
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        if names.is_empty() {
            return Err(PresentationError::NoGenerators);
        }
        let mut seen = HashMap::new();
        for name in &names {
            if !is_identifier(name) {
                return Err(PresentationError::InvalidName(name.clone()));
            }
            if seen.insert(name.as_str(), ()).is_some() {
                return Err(PresentationError::DuplicateName(name.clone()));
            }
        }
        let g = names.len();
        let mut reduced = Vec::with_capacity(relators.len());
        for r in relators {
            if let Some(&bad) = r.letters().iter().find(|l| l.unsigned_abs() as usize > g || **l == 0) {
                return Err(PresentationError::GeneratorOutOfRange { index: bad, count: g });
            }
            let r = free_reduce(&r);
            if !r.is_empty() {
                reduced.push(r);
            }
        }
        Ok(Presentation { names, relators: reduced })
    }

    /// Presentation with generators named `x1, ..., xg`.
    pub fn with_default_names(g: usize, relators: Vec<Word>) -> Result<Self, PresentationError> {
        Presentation::new((1..=g).map(|i| format!("x{i}")).collect(), relators)
    }

    pub fn free(names: &[&str]) -> Self {
        Presentation::new(names.iter().map(|s| s.to_string()).collect(), vec![])
            .expect("valid free group names")
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Renders a word with this presentation's generator names.
    pub fn render_word(&self, w: &Word) -> String {
        let mut parts = Vec::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let l = letters[i];
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == l {
                run += 1;
            }
            let name = &self.names[l.unsigned_abs() as usize - 1];
            let exp = run as i64 * l.signum() as i64;
            if exp == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{exp}"));
            }
            i += run;
        }
        parts.join(" ")
    }

    /// The two-line text format accepted by [`parse_presentation`].
    pub fn render(&self) -> String {
        let rels: Vec<String> = self.relators.iter().map(|r| self.render_word(r)).collect();
        let mut out = format!("gens: {}\n", self.names.join(" "));
        if rels.is_empty() {
            out.push_str("rels:\n");
        } else {
            out.push_str(&format!("rels: {}\n", rels.join(" ; ")));
        }
        out
    }

    /// Integer invariants of the abelianization: `(free_rank, torsion)` where the
    /// torsion coefficients are the invariant factors greater than one.
    pub fn abelian_invariants(&self) -> (usize, Vec<i64>) {
        let g = self.generator_count();
        let rows: Vec<Vec<i64>> = self.relators.iter().map(|r| r.exponent_sums(g)).collect();
        let diag = integer_smith_diagonal(rows, g);
        let rank = diag.len();
        let torsion = diag.into_iter().filter(|&d| d > 1).collect();
        (g - rank, torsion)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Nonzero diagonal of the Smith form of an integer matrix (absolute values).
fn integer_smith_diagonal(mut a: Vec<Vec<i64>>, cols: usize) -> Vec<i64> {
    let rows = a.len();
    let mut diag = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        // smallest nonzero absolute entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let mut clean = true;
        for i in k + 1..rows {
            let q = a[i][k] / a[k][k];
            if q != 0 {
                let (top, bottom) = a.split_at_mut(i);
                for (x, y) in bottom[0][k..].iter_mut().zip(&top[k][k..]) {
                    *x -= q * y;
                }
            }
            if a[i][k] != 0 {
                clean = false;
            }
        }
        for j in k + 1..cols {
            let q = a[k][j] / a[k][k];
            if q != 0 {
                for row in a.iter_mut().skip(k) {
                    row[j] -= q * row[k];
                }
            }
            if a[k][j] != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        let pivot = a[k][k];
        let offender = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| a[i][j] % pivot != 0));
        if let Some(i) = offender {
            let (top, bottom) = a.split_at_mut(i);
            for (x, y) in top[k][k..].iter_mut().zip(&bottom[0][k..]) {
                *x += y;
            }
            continue;
        }
        diag.push(pivot.abs());
        k += 1;
    }
    diag
}

/// Parses the two-line presentation format:
///
/// ```text
/// gens: a t
/// rels: t a t^-1 a^-2 ; ...
/// ```
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (gens_no, gens_line) = lines.next().ok_or(ParseError::NoGenerators)?;
    let gens_body = strip_keyword(gens_line, "gens:", gens_no + 1)?;
    let names: Vec<String> = gens_body.split_whitespace().map(str::to_string).collect();
    if names.is_empty() {
        return Err(ParseError::NoGenerators);
    }
    for name in &names {
        if !is_identifier(name) {
            let column = column_of(gens_line, name);
            return Err(ParseError::Syntax {
                line: gens_no + 1,
                column,
                message: format!("`{name}` is not an identifier"),
            });
        }
    }
    if let Some((_, dup)) = names.iter().enumerate().find(|(i, n)| names[..*i].contains(n)) {
        return Err(ParseError::Syntax {
            line: gens_no + 1,
            column: column_of(gens_line, dup),
            message: format!("duplicate generator `{dup}`"),
        });
    }
    let mut relators = Vec::new();
    if let Some((rels_no, rels_line)) = lines.next() {
        let line = rels_no + 1;
        let body = strip_keyword(rels_line, "rels:", line)?;
        let body_offset = rels_line.len() - body.len();
        let mut offset = body_offset;
        for chunk in body.split(';') {
            relators.push(parse_word_at(chunk, &names, line, offset)?);
            offset += chunk.len() + 1;
        }
        // a blank `rels:` line yields one empty chunk; it reduces away below
        if let Some((extra_no, extra)) = lines.next() {
            return Err(ParseError::Syntax {
                line: extra_no + 1,
                column: 1 + extra.len() - extra.trim_start().len(),
                message: "unexpected content after `rels:` line".into(),
            });
        }
    }
    Presentation::new(names, relators).map_err(|e| ParseError::Syntax {
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

fn column_of(line: &str, token: &str) -> usize {
    line.find(token).map(|c| c + 1).unwrap_or(1)
}

fn strip_keyword<'a>(line: &'a str, keyword: &str, line_no: usize) -> Result<&'a str, ParseError> {
    let trimmed = line.trim_start();
    match trimmed.strip_prefix(keyword) {
        Some(rest) => Ok(rest),
        None => Err(ParseError::Syntax {
            line: line_no,
            column: 1 + line.len() - trimmed.len(),
            message: format!("expected `{keyword}`"),
        }),
    }
}

/// Parses a whitespace-separated word such as `t a t^-1 a^-2`.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word, ParseError> {
    parse_word_at(text, names, 1, 0)
}

fn parse_word_at(text: &str, names: &[String], line: usize, offset: usize) -> Result<Word, ParseError> {
    let mut letters = Vec::new();
    let mut pos = 0;
    for token in text.split_whitespace() {
        let start = pos + text[pos..].find(token).expect("token comes from text");
        pos = start + token.len();
        let column = offset + start + 1;
        let (name, exp) = match token.split_once('^') {
            None => (token, 1i64),
            Some((name, exp)) => {
                let exp: i64 = exp.parse().map_err(|_| ParseError::Syntax {
                    line,
                    column: column + name.len() + 1,
                    message: format!("bad exponent `{exp}`"),
                })?;
                if exp == 0 {
                    return Err(ParseError::Syntax {
                        line,
                        column: column + name.len() + 1,
                        message: "exponent must be nonzero".into(),
                    });
                }
                (name, exp)
            }
        };
        let Some(idx) = names.iter().position(|n| n == name) else {
            if !is_identifier(name) {
                return Err(ParseError::Syntax { line, column, message: format!("bad letter `{token}`") });
            }
            return Err(ParseError::UnknownGenerator { line, column, name: name.to_string() });
        };
        let letter = (idx + 1) as i32 * exp.signum() as i32;
        letters.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
    }
    Ok(Word::new(letters))
}

/// A homomorphism `G -> Z`, given by its values on the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    values: Vec<i64>,
}

impl Character {
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, generator: usize) -> i64 {
        self.values[generator - 1]
    }

    /// Value on an arbitrary word.
    pub fn evaluate(&self, w: &Word) -> i64 {
        w.letters()
            .iter()
            .map(|&l| l.signum() as i64 * self.values[l.unsigned_abs() as usize - 1])
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn negated(&self) -> Character {
        Character { values: self.values.iter().map(|v| -v).collect() }
    }

    /// `name=value` pairs in generator order, e.g. `a=0,t=1`.
    pub fn label(&self, p: &Presentation) -> String {
        p.generator_names()
            .iter()
            .zip(&self.values)
            .map(|(n, v)| format!("{n}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Extends to a presentation obtained by appending generators defined by
    /// the given words (see [`TietzeMove::NewGenerator`]).
    pub fn extended(&self, definitions: &[Word]) -> Character {
        let mut values = self.values.clone();
        for d in definitions {
            let v = Character { values: values.clone() }.evaluate(d);
            values.push(v);
        }
        Character { values }
    }
}

/// Checks that `values` kills every relator and wraps it as a [`Character`].
pub fn validate_character(p: &Presentation, values: &[i64]) -> Result<Character, PresentationError> {
    if values.len() != p.generator_count() {
        return Err(PresentationError::CharacterLength { expected: p.generator_count(), got: values.len() });
    }
    let ch = Character { values: values.to_vec() };
    for (index, r) in p.relators().iter().enumerate() {
        let sum = ch.evaluate(r);
        if sum != 0 {
            return Err(PresentationError::NotAHomomorphism { index, relator: p.render_word(r), sum });
        }
    }
    Ok(ch)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterParseError {
    #[error("bad character entry `{0}` (expected name=int)")]
    Syntax(String),
    #[error("unknown generator `{0}` in character")]
    UnknownGenerator(String),
    #[error("generator `{0}` assigned twice")]
    Duplicate(String),
}

/// Parses `char: a=0, t=1` (the `char:` prefix is optional). Unlisted
/// generators default to 0. The result is not yet validated.
pub fn parse_character_values(p: &Presentation, text: &str) -> Result<Vec<i64>, CharacterParseError> {
    let body = text.trim();
    let body = body.strip_prefix("char:").unwrap_or(body);
    let mut values = vec![0i64; p.generator_count()];
    let mut assigned = vec![false; p.generator_count()];
    for entry in body.split(',').map(str::trim).filter(|e| !e.is_empty()) {
        let (name, value) = entry.split_once('=').ok_or_else(|| CharacterParseError::Syntax(entry.into()))?;
        let (name, value) = (name.trim(), value.trim());
        let idx = p.generator_index(name).ok_or_else(|| CharacterParseError::UnknownGenerator(name.into()))?;
        if assigned[idx] {
            return Err(CharacterParseError::Duplicate(name.into()));
        }
        values[idx] = value.parse().map_err(|_| CharacterParseError::Syntax(entry.into()))?;
        assigned[idx] = true;
    }
    Ok(values)
}

/// Presentation of `A x B`: generators of `A` then `B`, relators of both, and
/// the commutators `[x_i, y_j]` in row-major order.
pub fn direct_product(a: &Presentation, b: &Presentation) -> Presentation {
    let ga = a.generator_count();
    let mut names: Vec<String> = a.names.clone();
    for n in &b.names {
        let mut candidate = n.clone();
        while names.contains(&candidate) || a.names.contains(&candidate) {
            candidate.push('_');
        }
        names.push(candidate);
    }
    let shift = |w: &Word| Word::new(w.letters().iter().map(|&l| l + l.signum() * ga as i32).collect());
    let mut relators = a.relators.clone();
    relators.extend(b.relators.iter().map(shift));
    for i in 1..=ga {
        for j in 1..=b.generator_count() {
            relators.push(commutator(&Word::generator(i), &Word::generator(ga + j)));
        }
    }
    Presentation::new(names, relators).expect("product of valid presentations is valid")
}

/// Tietze transformations used to produce alternative presentations of the
/// same group.
#[derive(Clone, Debug)]
pub enum TietzeMove {
    /// Append the product of conjugates `w_1 r_{i_1}^{e_1} w_1^-1 ...`; each
    /// factor is `(conjugator, relator index, exponent)`.
    RedundantRelator(Vec<(Word, usize, i64)>),
    /// Append a generator `name` and the relator `name * definition^-1`.
    NewGenerator { name: String, definition: Word },
}

pub fn tietze_variant(p: &Presentation, mv: &TietzeMove) -> Result<Presentation, PresentationError> {
    let g = p.generator_count();
    let check = |w: &Word| {
        if w.max_generator() > g {
            Err(PresentationError::MalformedRecipe(format!("word mentions generator {} of {g}", w.max_generator())))
        } else {
            Ok(())
        }
    };
    match mv {
        TietzeMove::RedundantRelator(factors) => {
            if factors.is_empty() {
                return Err(PresentationError::MalformedRecipe("empty product of conjugates".into()));
            }
            let mut product = Word::empty();
            for (conj, idx, exp) in factors {
                check(conj)?;
                let r = p.relators.get(*idx).ok_or_else(|| {
                    PresentationError::MalformedRecipe(format!("relator index {idx} out of range"))
                })?;
                product = product.mul(conj).mul(&r.pow(*exp)).mul(&conj.inverse());
            }
            let mut relators = p.relators.clone();
            relators.push(product);
            Presentation::new(p.names.clone(), relators)
        }
        TietzeMove::NewGenerator { name, definition } => {
            check(definition)?;
            let mut names = p.names.clone();
            names.push(name.clone());
            let mut relators = p.relators.clone();
            relators.push(Word::generator(g + 1).mul(&definition.inverse()));
            Presentation::new(names, relators)
        }
    }
}
