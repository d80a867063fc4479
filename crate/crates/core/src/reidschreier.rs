//! Reidemeister–Schreier rewriting: a presentation of `ker alpha` together
//! with the restriction of a character to it.

use std::collections::VecDeque;

use crate::quotients::{regular_representation, FiniteQuotient};
use crate::words::{validate_character, Character, Presentation, Word};

/// Right action of the generators on the cosets of `ker alpha`, identified
/// with the elements of `Im alpha`. Coset 0 is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetAction {
    /// `action[i-1][c]` is the coset `c x_i`.
    pub action: Vec<Vec<usize>>,
    pub base: usize,
}

impl CosetAction {
    pub fn coset_count(&self) -> usize {
        self.action.first().map_or(1, Vec::len)
    }

    /// Coset reached from `c` by reading `w`.
    pub fn apply(&self, c: usize, w: &Word) -> usize {
        w.letters().iter().fold(c, |d, &l| {
            let perm = &self.action[l.unsigned_abs() as usize - 1];
            if l > 0 {
                perm[d]
            } else {
                perm.iter().position(|&x| x == d).expect("permutation")
            }
        })
    }
}

pub fn coset_action(p: &Presentation, q: &FiniteQuotient) -> CosetAction {
    debug_assert_eq!(q.gen_images().len(), p.generator_count());
    let q = q.restrict_to_image();
    let action = q.gen_images().iter().map(|&e| regular_representation(q.group(), e)).collect();
    CosetAction { action, base: 0 }
}

/// Presentation of `K = ker alpha` on the nontrivial Schreier generators
/// `s_{c,i} = T(c) x_i T(c x_i)^-1`, named `{x_i}_{c}`.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    pub presentation: Presentation,
    /// `schreier_generators[c][i-1]`: 1-based generator of `K`, or `None`
    /// when `s_{c,i}` is freely trivial.
    pub schreier_generators: Vec<Vec<Option<usize>>>,
    /// Each generator of `K` as a word in the ambient generators.
    pub generator_words: Vec<Word>,
    pub transversal: Vec<Word>,
    pub restricted_character: Character,
    pub index: usize,
}

/// Breadth-first Schreier transversal using positive letters in generator
/// order.
fn schreier_transversal(action: &CosetAction) -> Vec<Word> {
    let n = action.coset_count();
    let mut transversal: Vec<Option<Word>> = vec![None; n];
    transversal[action.base] = Some(Word::empty());
    let mut queue = VecDeque::from([action.base]);
    while let Some(c) = queue.pop_front() {
        for (i, perm) in action.action.iter().enumerate() {
            let d = perm[c];
            if transversal[d].is_none() {
                let mut letters = transversal[c].as_ref().expect("visited").letters().to_vec();
                letters.push(i as i32 + 1);
                transversal[d] = Some(Word::new(letters));
                queue.push_back(d);
            }
        }
    }
    transversal.into_iter().map(|t| t.expect("action is transitive")).collect()
}

pub fn rewrite_subgroup(p: &Presentation, q: &FiniteQuotient, phi: &Character) -> SubgroupPresentation {
    let action = coset_action(p, q);
    let n = action.coset_count();
    let g = p.generator_count();
    let transversal = schreier_transversal(&action);

    let mut schreier_generators = vec![vec![None; g]; n];
    let mut names = Vec::new();
    let mut generator_words = Vec::new();
    let mut values = Vec::new();
    for (c, slots) in schreier_generators.iter_mut().enumerate() {
        for (i, slot) in slots.iter_mut().enumerate() {
            let d = action.action[i][c];
            let s = transversal[c].mul(&Word::generator(i + 1)).mul(&transversal[d].inverse());
            if s.is_empty() {
                continue;
            }
            values.push(phi.evaluate(&transversal[c]) + phi.value(i + 1) - phi.evaluate(&transversal[d]));
            names.push(format!("{}_{}", p.generator_names()[i], c));
            generator_words.push(s);
            *slot = Some(names.len());
        }
    }

    let letter = |c: usize, i: usize, sign: i32| schreier_generators[c][i].map(|k| sign * k as i32);
    let mut relators = Vec::with_capacity(n * p.relators().len());
    for r in p.relators() {
        for start in 0..n {
            let mut d = start;
            let mut out = Vec::new();
            for &l in r.letters() {
                let i = l.unsigned_abs() as usize - 1;
                let perm = &action.action[i];
                if l > 0 {
                    out.extend(letter(d, i, 1));
                    d = perm[d];
                } else {
                    let e = perm.iter().position(|&x| x == d).expect("permutation");
                    out.extend(letter(e, i, -1));
                    d = e;
                }
            }
            debug_assert_eq!(d, start, "relator must act trivially");
            relators.push(Word::new(out));
        }
    }
    let presentation = Presentation::new(names, relators).expect("Schreier generator names are distinct");
    let restricted_character =
        validate_character(&presentation, &values).expect("restriction of a character is a character");
    SubgroupPresentation { presentation, schreier_generators, generator_words, transversal, restricted_character, index: n }
}
