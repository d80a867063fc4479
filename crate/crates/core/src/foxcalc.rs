//! Fox free differential calculus and evaluation of free-group-ring
//! elements under `g -> t^{phi(g)} P(alpha(g))`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::polyalg::{CoefficientField, LaurentPoly, PolyMatrix};
use crate::quotients::FiniteQuotient;
use crate::words::{Character, Presentation, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoxError {
    #[error("generator index {index} out of range 1..={count}")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("relator {0} not killed by the representation")]
    RelatorNotKilled(usize),
    #[error("character has {got} values, presentation has {expected} generators")]
    CharacterLength { expected: usize, got: usize },
    #[error("quotient has {got} generator images, presentation has {expected} generators")]
    QuotientLength { expected: usize, got: usize },
}

/// Element of the integral group ring of a free group.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::empty(), 1)
    }

    /// `c * w` with `w` freely reduced first.
    pub fn from_word(w: Word, c: i64) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        let w = crate::words::free_reduce(&w);
        match self.terms.entry(w) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == 0 {
                    slot.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coefficient(&self, w: &Word) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        GroupRingElement { terms: self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                out.add_term(u.mul(v), a * b);
            }
        }
        out
    }

    /// Left multiplication by a group element.
    pub fn left_mul_word(&self, u: &Word) -> Self {
        let mut out = Self::zero();
        for (v, c) in self.terms() {
            out.add_term(u.mul(v), c);
        }
        out
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms().map(|(w, c)| format!("{c}*{:?}", w.letters())).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `d r / d x_i` (generator index 1-based).
///
/// Iterative form of the product rule: the letter at position `k`
/// contributes `+prefix` for `x_i` and `-(prefix x_i^{-1})` for `x_i^{-1}`.
pub fn fox_derivative(r: &Word, i: usize, generator_count: usize) -> Result<GroupRingElement, FoxError> {
    if i == 0 || i > generator_count {
        return Err(FoxError::GeneratorOutOfRange { index: i, count: generator_count });
    }
    let target = i as i32;
    let mut out = GroupRingElement::zero();
    let letters = r.letters();
    for (k, &l) in letters.iter().enumerate() {
        if l == target {
            out.add_term(Word::new(letters[..k].to_vec()), 1);
        } else if l == -target {
            out.add_term(Word::new(letters[..=k].to_vec()), -1);
        }
    }
    Ok(out)
}

/// All `d r_j / d x_i`, indexed `[j][i-1]`.
#[derive(Clone, Debug)]
pub struct FoxJacobian {
    entries: Vec<Vec<GroupRingElement>>,
}

impl FoxJacobian {
    pub fn new(p: &Presentation) -> Self {
        let g = p.generator_count();
        let entries = p
            .relators()
            .iter()
            .map(|r| (1..=g).map(|i| fox_derivative(r, i, g).expect("index in range")).collect())
            .collect();
        FoxJacobian { entries }
    }

    pub fn get(&self, relator: usize, generator: usize) -> &GroupRingElement {
        &self.entries[relator][generator - 1]
    }

    pub fn relator_count(&self) -> usize {
        self.entries.len()
    }
}

/// Checks `sum_i (d r / d x_i)(x_i - 1) = r - 1` in the free group ring.
pub fn fundamental_identity_check(p: &Presentation, r: usize) -> bool {
    let Some(rel) = p.relators().get(r) else {
        return false;
    };
    identity_holds(rel, p.generator_count())
}

pub(crate) fn identity_holds(rel: &Word, g: usize) -> bool {
    let mut lhs = GroupRingElement::zero();
    for i in 1..=g {
        let d = fox_derivative(rel, i, g).expect("index in range");
        let xi_minus_one = GroupRingElement::from_word(Word::generator(i), 1).sub(&GroupRingElement::one());
        lhs = lhs.add(&d.mul(&xi_minus_one));
    }
    let rhs = GroupRingElement::from_word(rel.clone(), 1).sub(&GroupRingElement::one());
    lhs == rhs
}

/// `g -> t^{phi(g)} P(alpha(g))`, with `P(q)` the right regular
/// representation: row `x` has its entry in column `x q`.
#[derive(Clone, Debug)]
pub struct Representation {
    character: Character,
    quotient: FiniteQuotient,
    field: CoefficientField,
    matrices: Vec<PolyMatrix>,
}

pub fn build_representation(
    p: &Presentation,
    phi: &Character,
    q: &FiniteQuotient,
    f: CoefficientField,
) -> Result<Representation, FoxError> {
    let g = p.generator_count();
    if phi.values().len() != g {
        return Err(FoxError::CharacterLength { expected: g, got: phi.values().len() });
    }
    if q.gen_images().len() != g {
        return Err(FoxError::QuotientLength { expected: g, got: q.gen_images().len() });
    }
    let mut rep = Representation { character: phi.clone(), quotient: q.clone(), field: f, matrices: Vec::new() };
    rep.matrices = (1..=g).map(|i| rep.word_matrix(&Word::generator(i))).collect();
    for (j, r) in p.relators().iter().enumerate() {
        if rep.word_matrix(r) != PolyMatrix::identity(rep.dim(), f) {
            return Err(FoxError::RelatorNotKilled(j));
        }
    }
    Ok(rep)
}

impl Representation {
    pub fn dim(&self) -> usize {
        self.quotient.group().order()
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    pub fn quotient(&self) -> &FiniteQuotient {
        &self.quotient
    }

    /// `Phi(x_i)`, 1-based.
    pub fn generator_matrix(&self, i: usize) -> &PolyMatrix {
        &self.matrices[i - 1]
    }

    /// `(alpha(w), phi(w))`, the data of the monomial matrix `Phi(w)`.
    pub fn monomial(&self, w: &Word) -> (usize, i64) {
        (self.quotient.evaluate(w), self.character.evaluate(w))
    }

    pub fn word_matrix(&self, w: &Word) -> PolyMatrix {
        let (q, e) = self.monomial(w);
        let group = self.quotient.group();
        let mut m = PolyMatrix::zeros(self.dim(), self.dim(), self.field);
        for x in 0..self.dim() {
            m.set(x, group.mul(x, q), LaurentPoly::t_pow(e, self.field));
        }
        m
    }

    /// Linear extension of `Phi` to the group ring.
    pub fn evaluate(&self, e: &GroupRingElement) -> PolyMatrix {
        let n = self.dim();
        let group = self.quotient.group();
        let mut m = PolyMatrix::zeros(n, n, self.field);
        for (w, c) in e.terms() {
            let (q, exp) = self.monomial(w);
            let term = LaurentPoly::t_pow(exp, self.field).scale(&self.field.from_i64(c));
            for x in 0..n {
                let col = group.mul(x, q);
                let v = m.get(x, col) + &term;
                m.set(x, col, v);
            }
        }
        m
    }
}
