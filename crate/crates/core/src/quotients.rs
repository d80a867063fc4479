//! Finite target groups, homomorphism search from a presented group, and
//! kernel bookkeeping for quotients.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::words::{Presentation, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group table: {0}")]
    MalformedTable(String),
    #[error("group table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("element 0 is not the identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("unknown group `{0}` (expected trivial, z<m> or s<n>)")]
    UnknownGroup(String),
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("element id {0} out of range")]
    ElementOutOfRange(usize),
    #[error("relator {0} does not map to the identity")]
    RelatorNotKilled(usize),
}

/// A finite group given by its multiplication table; element 0 is the
/// identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    /// Permutation (0-based images) of each element, when built from one.
    permutations: Option<Vec<Vec<usize>>>,
}

impl FiniteGroup {
    /// Validates identity, inverses and associativity.
    pub fn from_table(name: impl Into<String>, rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::MalformedTable("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::MalformedTable(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&e| e >= n) {
                return Err(GroupError::ElementOutOfRange(bad));
            }
            table.extend_from_slice(row);
        }
        for a in 0..n {
            if table[a] != a || table[a * n] != a {
                return Err(GroupError::NoIdentity);
            }
        }
        let mut inverses = vec![0; n];
        for (a, inv) in inverses.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&b| table[a * n + b] == 0 && table[b * n + a] == 0)
                .ok_or(GroupError::NoInverse(a))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b];
                for c in 0..n {
                    if table[ab * n + c] != table[a * n + table[b * n + c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.into(), order: n, table, inverses, permutations: None })
    }

    pub fn trivial() -> Self {
        FiniteGroup::cyclic(1).renamed("trivial")
    }

    /// `Z/m` with element `k` the residue `k`.
    pub fn cyclic(m: usize) -> Self {
        assert!(m >= 1);
        let rows = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        FiniteGroup::from_table(format!("Z/{m}"), rows).expect("cyclic table is a group")
    }

    /// `S_n` on `{0..n-1}`; elements are the permutations in lexicographic
    /// order (identity first), composed left to right: `(g h)(i) = h(g(i))`.
    pub fn symmetric(n: usize) -> Self {
        assert!(n >= 1);
        let perms = lex_permutations(n);
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("permutation present");
        let rows = perms
            .iter()
            .map(|g| perms.iter().map(|h| index(&g.iter().map(|&i| h[i]).collect())).collect())
            .collect();
        let mut group = FiniteGroup::from_table(format!("S{n}"), rows).expect("symmetric table is a group");
        group.permutations = Some(perms);
        group
    }

    /// Parses `trivial`, `z<m>` / `Z/<m>`, `s<n>` / `S<n>`.
    pub fn from_name(name: &str) -> Result<Self, GroupError> {
        let lower = name.trim().to_ascii_lowercase();
        if lower == "trivial" || lower == "1" {
            return Ok(FiniteGroup::trivial());
        }
        let num = |s: &str| s.parse::<usize>().ok().filter(|&n| (1..=1000).contains(&n));
        if let Some(m) = lower.strip_prefix("z/").or_else(|| lower.strip_prefix('z')).and_then(num) {
            return Ok(FiniteGroup::cyclic(m));
        }
        if let Some(n) = lower.strip_prefix('s').and_then(num).filter(|&n| n <= 6) {
            return Ok(FiniteGroup::symmetric(n));
        }
        Err(GroupError::UnknownGroup(name.to_string()))
    }

    /// Parses the table format: `order: n` then `n` rows of element ids.
    pub fn parse_table(name: impl Into<String>, text: &str) -> Result<Self, GroupError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| GroupError::MalformedTable("missing `order:` line".into()))?;
        let n: usize = header
            .strip_prefix("order:")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| GroupError::MalformedTable(format!("bad header `{header}`")))?;
        let mut rows = Vec::with_capacity(n);
        for line in lines {
            let row: Result<Vec<usize>, _> = line.split_whitespace().map(str::parse).collect();
            rows.push(row.map_err(|_| GroupError::MalformedTable(format!("bad row `{line}`")))?);
        }
        if rows.len() != n {
            return Err(GroupError::MalformedTable(format!("expected {n} rows, found {}", rows.len())));
        }
        FiniteGroup::from_table(name, rows)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// Degree of the permutation representation this group was built from.
    pub fn permutation_degree(&self) -> Option<usize> {
        self.permutations.as_ref().map(|p| p[0].len())
    }

    /// Human-readable element: cycle notation for permutation groups,
    /// otherwise the id.
    pub fn element_label(&self, e: usize) -> String {
        match &self.permutations {
            Some(perms) => cycle_notation(&perms[e]),
            None => e.to_string(),
        }
    }

    /// Table of the subgroup formed by `elements` (which must be closed),
    /// relabelled `0..k` in increasing id order.
    pub fn subgroup_table(&self, elements: &[usize]) -> FiniteGroup {
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        debug_assert_eq!(sorted.first(), Some(&0));
        let pos = |e: usize| sorted.binary_search(&e).expect("subgroup is closed");
        let rows = sorted.iter().map(|&a| sorted.iter().map(|&b| pos(self.mul(a, b))).collect()).collect();
        let mut sub = FiniteGroup::from_table(format!("{}<{}>", self.name, sorted.len()), rows)
            .expect("closed subset of a group is a group");
        if let Some(perms) = &self.permutations {
            sub.permutations = Some(sorted.iter().map(|&e| perms[e].clone()).collect());
        }
        sub
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.order)
    }
}

fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    // standard next-permutation
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).expect("successor exists");
        current.swap(i, j);
        current[i + 1..].reverse();
        out.push(current.clone());
    }
}

fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = perm[i];
        }
        out.push_str(&format!("({})", cycle.join(" ")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// Smallest subset containing the identity and `seeds` that is closed under
/// multiplication, as sorted element ids.
pub fn image_closure(g: &FiniteGroup, seeds: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut out = vec![0];
    while let Some(x) = queue.pop_front() {
        for &s in seeds {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Right multiplication by `e` as a permutation: `q -> q e`.
pub fn regular_representation(g: &FiniteGroup, e: usize) -> Vec<usize> {
    (0..g.order()).map(|q| g.mul(q, e)).collect()
}

/// Homomorphism `alpha: G -> Q` given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuotient {
    group: Arc<FiniteGroup>,
    gen_images: Vec<usize>,
    surjective: bool,
}

impl FiniteQuotient {
    /// Checks that every relator maps to the identity.
    pub fn new(p: &Presentation, group: Arc<FiniteGroup>, gen_images: Vec<usize>) -> Result<Self, GroupError> {
        if gen_images.len() != p.generator_count() {
            return Err(GroupError::ImageCount { expected: p.generator_count(), got: gen_images.len() });
        }
        if let Some(&bad) = gen_images.iter().find(|&&e| e >= group.order()) {
            return Err(GroupError::ElementOutOfRange(bad));
        }
        for (i, r) in p.relators().iter().enumerate() {
            if evaluate_in(&group, &gen_images, r) != 0 {
                return Err(GroupError::RelatorNotKilled(i));
            }
        }
        let surjective = image_closure(&group, &gen_images).len() == group.order();
        Ok(FiniteQuotient { group, gen_images, surjective })
    }

    /// The map onto the trivial group.
    pub fn trivial(p: &Presentation) -> Self {
        FiniteQuotient {
            group: Arc::new(FiniteGroup::trivial()),
            gen_images: vec![0; p.generator_count()],
            surjective: true,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> Arc<FiniteGroup> {
        Arc::clone(&self.group)
    }

    pub fn gen_images(&self) -> &[usize] {
        &self.gen_images
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    /// Image of a word.
    pub fn evaluate(&self, w: &Word) -> usize {
        evaluate_in(&self.group, &self.gen_images, w)
    }

    /// Element ids of `Im alpha`, sorted.
    pub fn image(&self) -> Vec<usize> {
        image_closure(&self.group, &self.gen_images)
    }

    /// The same homomorphism viewed as a surjection onto its image.
    pub fn restrict_to_image(&self) -> FiniteQuotient {
        if self.surjective {
            return self.clone();
        }
        let image = self.image();
        let sub = self.group.subgroup_table(&image);
        let gen_images = self.gen_images.iter().map(|e| image.binary_search(e).expect("in image")).collect();
        FiniteQuotient { group: Arc::new(sub), gen_images, surjective: true }
    }

    /// Composite `G x H -> G -> Q` for a product presentation whose first
    /// generators are those of `G`; the remaining generators map to 1.
    pub fn through_projection(&self, total_generators: usize) -> FiniteQuotient {
        let mut gen_images = self.gen_images.clone();
        gen_images.resize(total_generators, 0);
        FiniteQuotient { group: Arc::clone(&self.group), gen_images, surjective: self.surjective }
    }

    /// Short description, e.g. `S3:[1,3]`.
    pub fn label(&self) -> String {
        let imgs: Vec<String> = self.gen_images.iter().map(|e| e.to_string()).collect();
        format!("{}:[{}]", self.group.name(), imgs.join(","))
    }
}

fn evaluate_in(g: &FiniteGroup, images: &[usize], w: &Word) -> usize {
    w.letters().iter().fold(0, |acc, &l| {
        let x = images[l.unsigned_abs() as usize - 1];
        g.mul(acc, if l > 0 { x } else { g.inv(x) })
    })
}

/// All homomorphisms `G -> target` (optionally only surjective ones), in
/// lexicographic order of the generator-image tuple.
pub fn enumerate_homs(p: &Presentation, target: &Arc<FiniteGroup>, surjective_only: bool) -> Vec<FiniteQuotient> {
    let g = p.generator_count();
    // relators become checkable once their largest generator is assigned
    let mut ready: Vec<Vec<&Word>> = vec![Vec::new(); g + 1];
    for r in p.relators() {
        ready[r.max_generator()].push(r);
    }
    let mut out = Vec::new();
    let mut images = vec![0usize; g];
    fn search(
        depth: usize,
        images: &mut Vec<usize>,
        ready: &[Vec<&Word>],
        target: &Arc<FiniteGroup>,
        surjective_only: bool,
        out: &mut Vec<FiniteQuotient>,
    ) {
        if depth == images.len() {
            let surjective = image_closure(target, images).len() == target.order();
            if surjective || !surjective_only {
                out.push(FiniteQuotient { group: Arc::clone(target), gen_images: images.clone(), surjective });
            }
            return;
        }
        for e in 0..target.order() {
            images[depth] = e;
            if ready[depth + 1].iter().all(|r| evaluate_in(target, images, r) == 0) {
                search(depth + 1, images, ready, target, surjective_only, out);
            }
        }
    }
    if ready[0].is_empty() {
        search(0, &mut images, &ready, target, surjective_only, &mut out);
    }
    out
}

/// `ker alpha_1 == ker alpha_2`, decided by comparing the image of the
/// paired map `G -> Q_1 x Q_2` with the two individual images.
pub fn same_kernel(p: &Presentation, q1: &FiniteQuotient, q2: &FiniteQuotient) -> bool {
    debug_assert_eq!(q1.gen_images.len(), p.generator_count());
    debug_assert_eq!(q2.gen_images.len(), p.generator_count());
    let n2 = q2.group.order();
    let seeds: Vec<(usize, usize)> = q1.gen_images.iter().copied().zip(q2.gen_images.iter().copied()).collect();
    let mut seen = vec![false; q1.group.order() * n2];
    seen[0] = true;
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    let mut size = 1;
    while let Some((a, b)) = queue.pop_front() {
        for &(s, t) in &seeds {
            let next = (q1.group.mul(a, s), q2.group.mul(b, t));
            let key = next.0 * n2 + next.1;
            if !seen[key] {
                seen[key] = true;
                size += 1;
                queue.push_back(next);
            }
        }
    }
    size == q1.image().len() && size == q2.image().len()
}

/// Ordered list of target groups for the scan loop.
#[derive(Clone, Debug, Default)]
pub struct QuotientCatalog {
    groups: Vec<Arc<FiniteGroup>>,
}

impl QuotientCatalog {
    pub fn groups(&self) -> &[Arc<FiniteGroup>] {
        &self.groups
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.groups.iter().map(|g| g.name().to_string()).collect()
    }
}

/// Cyclic groups `Z/m` for `2 <= m <= max_order`, symmetric groups `S_n`
/// (`n >= 3`) with `n! <= max_order`, then `extra`; sorted by order and name,
/// deduplicated by `(name, order)`. Extras larger than `max_order` are kept.
pub fn build_catalog(max_order: usize, extra: Vec<FiniteGroup>) -> QuotientCatalog {
    let mut groups: Vec<FiniteGroup> = (2..=max_order).map(FiniteGroup::cyclic).collect();
    let mut n = 3;
    let mut fact = 6;
    while fact <= max_order {
        groups.push(FiniteGroup::symmetric(n));
        n += 1;
        fact *= n;
    }
    groups.extend(extra);
    groups.sort_by(|a, b| (a.order, &a.name).cmp(&(b.order, &b.name)));
    let mut seen = BTreeSet::new();
    groups.retain(|g| seen.insert((g.order, g.name.clone())));
    QuotientCatalog { groups: groups.into_iter().map(Arc::new).collect() }
}
