//! Words over `G × Z^k` (the abelianised free product), projections onto `G`,
//! the separability conditions, labelled patterns and their copies in the
//! Cayley digraph.
//!
//! Free variables are `v1, v2, …`; a projection assigns a group element to
//! each of `v1..=vk` and fixes constants. The number of variables in scope is
//! carried by the caller, never by a word.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::budget::Outcome;
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::sequencing::{is_cycle_candidate, is_path_candidate, partial_sums, validate};
use crate::stats::RateReport;

/// Largest number of projections any exhaustive count will enumerate.
pub const ENUMERATION_CAP: u128 = 10_000_000;

/// Random assignments tried by [`find_copy`] before exhaustive search.
pub const DEFAULT_COPY_ATTEMPTS: u64 = 100_000;

/// Largest `|V(P)| + |E(P)|` accepted by [`find_copy`].
pub const MAX_PATTERN_SIZE: usize = 100;

/// `Σ z_i·v_i + g` with every stored `z_i` nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    coeffs: BTreeMap<u32, i64>,
    constant: Element,
}

impl Word {
    pub fn constant(g: Element) -> Self {
        Word { coeffs: BTreeMap::new(), constant: g }
    }

    /// The free variable `v_id`; ids start at 1.
    pub fn var(id: u32) -> Self {
        Word::term(id, 1)
    }

    pub fn term(id: u32, coeff: i64) -> Self {
        assert!(id >= 1, "free variable ids start at 1");
        let mut coeffs = BTreeMap::new();
        if coeff != 0 {
            coeffs.insert(id, coeff);
        }
        Word { coeffs, constant: Element::IDENTITY }
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, i64> {
        &self.coeffs
    }

    pub fn coeff(&self, id: u32) -> i64 {
        self.coeffs.get(&id).copied().unwrap_or(0)
    }

    pub fn constant_part(&self) -> Element {
        self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Every coefficient is ±1 and at least one variable occurs.
    pub fn is_linear(&self) -> bool {
        !self.coeffs.is_empty() && self.coeffs.values().all(|c| c.abs() == 1)
    }

    pub fn is_linear_in(&self, id: u32) -> bool {
        self.coeff(id).abs() == 1
    }

    pub fn is_linear_in_some(&self) -> bool {
        self.coeffs.values().any(|c| c.abs() == 1)
    }

    /// Largest variable id used, 0 for constants.
    pub fn max_var(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn plus(&self, group: &GroupSpec, other: &Word) -> Word {
        let mut coeffs = self.coeffs.clone();
        for (&id, &c) in &other.coeffs {
            let entry = coeffs.entry(id).or_insert(0);
            *entry += c;
            if *entry == 0 {
                coeffs.remove(&id);
            }
        }
        Word { coeffs, constant: group.add(self.constant, other.constant) }
    }

    pub fn negate(&self, group: &GroupSpec) -> Word {
        Word {
            coeffs: self.coeffs.iter().map(|(&id, &c)| (id, -c)).collect(),
            constant: group.neg(self.constant),
        }
    }

    pub fn minus(&self, group: &GroupSpec, other: &Word) -> Word {
        self.plus(group, &other.negate(group))
    }

    /// `π(w)` for the projection given by `assignment[i] = π(v_{i+1})`.
    /// Variables beyond the assignment must not occur.
    fn eval(&self, group: &GroupSpec, assignment: &[Element]) -> Element {
        self.coeffs.iter().fold(self.constant, |acc, (&id, &c)| {
            group.add(acc, group.mul(c, assignment[id as usize - 1]))
        })
    }

    /// Parses literals such as `v1 + v2 + (3)`, `2*v1 - v3`, `-v1`, `(4)`.
    /// Constants are element indices in parentheses.
    pub fn parse(group: &GroupSpec, input: &str) -> Result<Word> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let b = s.as_bytes();
        if b.is_empty() {
            return Err(Error::parse("empty word"));
        }
        let digits = |from: usize| {
            let mut to = from;
            while to < b.len() && b[to].is_ascii_digit() {
                to += 1;
            }
            to
        };
        let number = |from: usize, to: usize| -> Result<u64> {
            if to - from > 9 {
                return Err(Error::parse("number too long"));
            }
            s[from..to].parse().map_err(|_| Error::parse("expected a number"))
        };
        let mut word = Word::constant(Element::IDENTITY);
        let mut i = 0;
        let mut first = true;
        while i < b.len() {
            let mut sign = 1i64;
            match b[i] {
                b'+' => i += 1,
                b'-' => {
                    sign = -1;
                    i += 1;
                }
                _ if first => {}
                c => return Err(Error::parse(format!("expected '+' or '-' before {:?}", c as char))),
            }
            first = false;
            if i >= b.len() {
                return Err(Error::parse("dangling sign"));
            }
            if b[i] == b'(' {
                let close = s[i..].find(')').ok_or_else(|| Error::parse("unclosed '('"))? + i;
                let index = number(i + 1, close)?;
                if close != digits(i + 1) {
                    return Err(Error::parse("constants are element indices"));
                }
                let g = group.element(index)?;
                let g = if sign < 0 { group.neg(g) } else { g };
                word.constant = group.add(word.constant, g);
                i = close + 1;
                continue;
            }
            let end = digits(i);
            let coeff = if end > i { number(i, end)? as i64 } else { 1 };
            let had_digits = end > i;
            i = end;
            if i < b.len() && b[i] == b'*' {
                if !had_digits {
                    return Err(Error::parse("'*' needs a coefficient"));
                }
                i += 1;
            }
            if i < b.len() && (b[i] == b'v' || b[i] == b'V') {
                let end = digits(i + 1);
                if end == i + 1 {
                    return Err(Error::parse("variable needs an id"));
                }
                let id = number(i + 1, end)?;
                if id == 0 {
                    return Err(Error::parse("variable ids start at 1"));
                }
                let entry = word.coeffs.entry(id as u32).or_insert(0);
                *entry = entry
                    .checked_add(sign * coeff)
                    .ok_or_else(|| Error::parse("coefficient overflow"))?;
                if *entry == 0 {
                    word.coeffs.remove(&(id as u32));
                }
                i = end;
            } else {
                return Err(Error::parse("expected a variable vN or a constant (N)"));
            }
        }
        Ok(word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&id, &c) in &self.coeffs {
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.unsigned_abs())?;
            }
            write!(f, "v{id}")?;
            first = false;
        }
        if first {
            write!(f, "({})", self.constant)
        } else if !self.constant.is_identity() {
            write!(f, " + ({})", self.constant)
        } else {
            Ok(())
        }
    }
}

/// Which separability condition a pair of words meets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Separability {
    /// The difference has a coefficient ±1.
    Linear,
    /// The difference is a nonzero constant.
    NonzeroConstant,
    /// The difference is `±(3v_i − 2v_j) + g`.
    ThreeTwo,
}

/// The first condition among linear, nonzero-constant and 3/2 that the
/// difference `w2 − w` meets.
pub fn word_is_separable_pair(w: &Word, w2: &Word, group: &GroupSpec) -> Option<Separability> {
    let d = w2.minus(group, w);
    if d.is_linear_in_some() {
        return Some(Separability::Linear);
    }
    if d.is_constant() && !d.constant.is_identity() {
        return Some(Separability::NonzeroConstant);
    }
    let mut cs: Vec<i64> = d.coeffs.values().copied().collect();
    cs.sort_unstable();
    if cs == [-3, 2] || cs == [-2, 3] {
        return Some(Separability::ThreeTwo);
    }
    None
}

/// An assignment of group elements to `v1..=vk`; `π(v_i)` is entry `i − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Projection(pub Vec<Element>);

impl Projection {
    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, group: &GroupSpec, w: &Word) -> Result<Element> {
        if w.max_var() as usize > self.0.len() {
            return Err(Error::domain(format!("v{} is outside the {} variables in scope", w.max_var(), self.0.len())));
        }
        validate(group, &self.0)?;
        group.check(w.constant)?;
        Ok(w.eval(group, &self.0))
    }
}

fn projection_count(group: &GroupSpec, k: usize) -> Result<u128> {
    let mut size: u128 = 1;
    for _ in 0..k {
        size = size.saturating_mul(group.n() as u128);
        if size > ENUMERATION_CAP {
            return Err(Error::Budget { size, cap: ENUMERATION_CAP });
        }
    }
    Ok(size)
}

/// Visits all `n^k` assignments in lexicographic index order; the closure
/// returns true to stop early.
fn for_each_assignment(group: &GroupSpec, k: usize, mut visit: impl FnMut(&[Element]) -> bool) -> Result<()> {
    projection_count(group, k)?;
    let n = group.order();
    let mut a = vec![Element::IDENTITY; k];
    loop {
        if visit(&a) {
            return Ok(());
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            let next = a[i].index() as u32 + 1;
            if next < n {
                a[i] = Element::from_index_unchecked(next);
                break;
            }
            a[i] = Element::IDENTITY;
        }
    }
}

fn check_scope(group: &GroupSpec, words: &[&Word], k: usize) -> Result<()> {
    for w in words {
        if w.max_var() as usize > k {
            return Err(Error::domain(format!("v{} is outside the {k} variables in scope", w.max_var())));
        }
        group.check(w.constant)?;
    }
    Ok(())
}

/// All projections, enumerated exhaustively.
pub fn all_projections(group: &GroupSpec, k: usize) -> Result<Vec<Projection>> {
    let mut out = Vec::with_capacity(projection_count(group, k)? as usize);
    for_each_assignment(group, k, |a| {
        out.push(Projection(a.to_vec()));
        false
    })?;
    Ok(out)
}

/// `#{π : π(w) = target}` over all `n^k` projections.
pub fn count_projections_fixing(w: &Word, target: Element, group: &GroupSpec, k: usize) -> Result<u64> {
    check_scope(group, &[w], k)?;
    group.check(target)?;
    if !w.is_linear_in_some() {
        return Err(Error::precondition("the word must be linear in some variable"));
    }
    let mut count = 0;
    for_each_assignment(group, k, |a| {
        count += u64::from(w.eval(group, a) == target);
        false
    })?;
    Ok(count)
}

/// `#{π : π(S) ∩ U ≠ ∅}` over all `n^k` projections.
pub fn count_projections_hitting(words: &[Word], targets: &[Element], group: &GroupSpec, k: usize) -> Result<u64> {
    check_scope(group, &words.iter().collect::<Vec<_>>(), k)?;
    validate(group, targets)?;
    let mut hit = vec![false; group.n()];
    targets.iter().for_each(|t| hit[t.index()] = true);
    let mut count = 0;
    for_each_assignment(group, k, |a| {
        count += u64::from(words.iter().any(|w| hit[w.eval(group, a).index()]));
        false
    })?;
    Ok(count)
}

fn separable_pairs(words: &[Word], group: &GroupSpec) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            if words[i] != words[j] && word_is_separable_pair(&words[i], &words[j], group).is_some() {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// `#{π : π(w) = π(w')` for some separable pair `w, w'` in `S`}.
pub fn count_non_separating_projections(words: &[Word], group: &GroupSpec, k: usize) -> Result<u64> {
    if words.len() > 1000 {
        return Err(Error::precondition("at most 1000 words"));
    }
    check_scope(group, &words.iter().collect::<Vec<_>>(), k)?;
    let pairs = separable_pairs(words, group);
    if pairs.is_empty() {
        return Ok(0);
    }
    let mut count = 0;
    let mut values = vec![Element::IDENTITY; words.len()];
    for_each_assignment(group, k, |a| {
        for (v, w) in values.iter_mut().zip(words) {
            *v = w.eval(group, a);
        }
        count += u64::from(pairs.iter().any(|&(i, j)| values[i] == values[j]));
        false
    })?;
    Ok(count)
}

/// The exact integer form `count^5 · n ≤ (|S|² · n^k)^5` of the
/// `|S|² n^{k − 1/5}` bound on non-separating projections.
pub fn non_separating_bound_holds(count: u64, set_size: usize, n: usize, k: usize) -> Result<bool> {
    let overflow = || Error::Budget { size: u128::MAX, cap: u128::MAX };
    let lhs = (count as u128).checked_pow(5).and_then(|x| x.checked_mul(n as u128)).ok_or_else(overflow)?;
    let base = (set_size as u128 * set_size as u128)
        .checked_mul((n as u128).checked_pow(k as u32).ok_or_else(overflow)?)
        .ok_or_else(overflow)?;
    Ok(lhs <= base.checked_pow(5).ok_or_else(overflow)?)
}

/// One labelled, directed edge of a pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternEdge {
    pub from: usize,
    pub to: usize,
    pub label: Word,
}

/// A simple digraph with word labels on vertices and edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub group: GroupSpec,
    pub vertices: Vec<Word>,
    pub edges: Vec<PatternEdge>,
}

fn distinct(words: impl IntoIterator<Item = Word>) -> Vec<Word> {
    let mut seen = HashSet::new();
    words.into_iter().filter(|w| seen.insert(w.clone())).collect()
}

fn pairwise_separable(words: &[Word], group: &GroupSpec) -> bool {
    (0..words.len()).all(|i| {
        (i + 1..words.len()).all(|j| word_is_separable_pair(&words[i], &words[j], group).is_some())
    })
}

impl Pattern {
    /// Number of free variables in scope: the largest id used.
    pub fn num_vars(&self) -> usize {
        let v = self.vertices.iter().map(Word::max_var);
        let e = self.edges.iter().map(|e| e.label.max_var());
        v.chain(e).max().unwrap_or(0) as usize
    }

    pub fn size(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    /// The first violated pattern axiom, if any.
    pub fn check(&self) -> std::result::Result<(), String> {
        let labels = self.vertices.iter().chain(self.edges.iter().map(|e| &e.label));
        for w in labels {
            if !self.group.contains(w.constant) {
                return Err(format!("label {w} has an out-of-range constant"));
            }
        }
        if distinct(self.vertices.iter().cloned()).len() != self.vertices.len() {
            return Err("vertex labels are not distinct".into());
        }
        let mut arcs = HashSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.from >= self.vertices.len() || e.to >= self.vertices.len() {
                return Err(format!("edge {i} has an endpoint out of range"));
            }
            if e.from == e.to {
                return Err(format!("edge {i} is a loop"));
            }
            if !arcs.insert((e.from, e.to)) {
                return Err(format!("edge {i} duplicates an earlier edge"));
            }
            let diff = self.vertices[e.from].minus(&self.group, &self.vertices[e.to]);
            if diff != e.label {
                return Err(format!("edge {i} is labelled {} but its endpoints differ by {diff}", e.label));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> bool {
        self.check().is_ok()
    }

    pub fn vertex_label_set(&self) -> Vec<Word> {
        distinct(self.vertices.iter().cloned())
    }

    pub fn edge_label_set(&self) -> Vec<Word> {
        distinct(self.edges.iter().map(|e| e.label.clone()))
    }

    /// Vertex labels and edge labels are each pairwise separable and every
    /// label is constant or linear in some variable. Vertex/edge pairs are
    /// not compared.
    pub fn is_well_distributed(&self) -> bool {
        let labels_ok = self
            .vertices
            .iter()
            .chain(self.edges.iter().map(|e| &e.label))
            .all(|w| w.is_constant() || w.is_linear_in_some());
        self.validate()
            && labels_ok
            && pairwise_separable(&self.vertex_label_set(), &self.group)
            && pairwise_separable(&self.edge_label_set(), &self.group)
    }

    /// A directed path on `k + 1` vertices: vertex `i` is `v1 − Σ_{j<i} c_j`
    /// and edge `i` carries the constant `c_i`.
    pub fn path(group: &GroupSpec, colors: &[Element]) -> Result<Pattern> {
        validate(group, colors)?;
        if !is_path_candidate(group, colors) {
            return Err(Error::precondition("colours must form a path-candidate"));
        }
        Ok(Self::walk(group, colors, colors.len() + 1))
    }

    /// A directed `k`-cycle labelled like [`Pattern::path`], closed by the
    /// last colour.
    pub fn cycle(group: &GroupSpec, colors: &[Element]) -> Result<Pattern> {
        validate(group, colors)?;
        if !is_cycle_candidate(group, colors)? {
            return Err(Error::precondition("colours must form a cycle-candidate"));
        }
        Ok(Self::walk(group, colors, colors.len()))
    }

    fn walk(group: &GroupSpec, colors: &[Element], nv: usize) -> Pattern {
        let sums = partial_sums(group, colors);
        let vertices = sums[..nv]
            .iter()
            .map(|&s| Word::var(1).plus(group, &Word::constant(group.neg(s))))
            .collect();
        let edges = colors
            .iter()
            .enumerate()
            .map(|(i, &c)| PatternEdge { from: i, to: (i + 1) % nv, label: Word::constant(c) })
            .collect();
        Pattern { group: group.clone(), vertices, edges }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = PatternDoc {
            group: self.group.to_string(),
            vertices: self.vertices.iter().map(Word::to_string).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc { from: e.from, to: e.to, label: e.label.to_string() })
                .collect(),
        };
        serde_json::to_value(doc).expect("pattern documents serialise")
    }

    /// Parses the node/edge-list JSON form. The result is not validated.
    pub fn from_json(text: &str) -> Result<Pattern> {
        let doc: PatternDoc = serde_json::from_str(text).map_err(|e| Error::parse(e.to_string()))?;
        let group = GroupSpec::parse(&doc.group)?;
        let vertices = doc.vertices.iter().map(|s| Word::parse(&group, s)).collect::<Result<_>>()?;
        let edges = doc
            .edges
            .iter()
            .map(|e| Ok(PatternEdge { from: e.from, to: e.to, label: Word::parse(&group, &e.label)? }))
            .collect::<Result<_>>()?;
        Ok(Pattern { group, vertices, edges })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternDoc {
    group: String,
    vertices: Vec<String>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: usize,
    to: usize,
    label: String,
}

/// A projection witnessing a copy of a pattern, with the images of its
/// vertex and edge labels in pattern order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternCopy {
    pub pattern: Pattern,
    pub projection: Projection,
    pub image_vertices: Vec<Element>,
    pub image_colors: Vec<Element>,
}

/// Where the labels of a copy may land.
#[derive(Clone, Debug)]
pub struct CopyTargets {
    vertex_ok: Vec<bool>,
    color_ok: Vec<bool>,
}

impl CopyTargets {
    /// Non-constant vertex labels must land in `vertex_pool \ forbidden` and
    /// non-constant edge labels in `color_pool \ forbidden`.
    pub fn new(group: &GroupSpec, vertex_pool: &[Element], color_pool: &[Element], forbidden: &[Element]) -> Result<Self> {
        validate(group, vertex_pool)?;
        validate(group, color_pool)?;
        validate(group, forbidden)?;
        let mark = |pool: &[Element]| {
            let mut ok = vec![false; group.n()];
            pool.iter().for_each(|e| ok[e.index()] = true);
            forbidden.iter().for_each(|e| ok[e.index()] = false);
            ok
        };
        Ok(CopyTargets { vertex_ok: mark(vertex_pool), color_ok: mark(color_pool) })
    }

    pub fn whole_group(group: &GroupSpec) -> Self {
        CopyTargets { vertex_ok: vec![true; group.n()], color_ok: vec![true; group.n()] }
    }
}

struct CopyChecker<'a> {
    pattern: &'a Pattern,
    targets: &'a CopyTargets,
    edge_labels: Vec<Word>,
    edge_pairs: Vec<(usize, usize)>,
    edge_slot: Vec<usize>,
}

impl<'a> CopyChecker<'a> {
    fn new(pattern: &'a Pattern, targets: &'a CopyTargets) -> Self {
        let edge_labels = pattern.edge_label_set();
        let edge_pairs = separable_pairs(&edge_labels, &pattern.group);
        let edge_slot = pattern
            .edges
            .iter()
            .map(|e| edge_labels.iter().position(|w| *w == e.label).expect("label in set"))
            .collect();
        CopyChecker { pattern, targets, edge_labels, edge_pairs, edge_slot }
    }

    /// Pool membership, injectivity on vertex labels, and separation of the
    /// edge label set.
    fn accepts(&self, a: &[Element]) -> Option<(Vec<Element>, Vec<Element>)> {
        let g = &self.pattern.group;
        let mut seen = HashSet::with_capacity(self.pattern.vertices.len());
        let mut verts = Vec::with_capacity(self.pattern.vertices.len());
        for w in &self.pattern.vertices {
            let x = w.eval(g, a);
            if (!w.is_constant() && !self.targets.vertex_ok[x.index()]) || !seen.insert(x) {
                return None;
            }
            verts.push(x);
        }
        let mut colors = Vec::with_capacity(self.edge_labels.len());
        for w in &self.edge_labels {
            let x = w.eval(g, a);
            if !w.is_constant() && !self.targets.color_ok[x.index()] {
                return None;
            }
            colors.push(x);
        }
        if self.edge_pairs.iter().any(|&(i, j)| colors[i] == colors[j]) {
            return None;
        }
        Some((verts, self.edge_slot.iter().map(|&s| colors[s]).collect()))
    }

    fn copy(&self, a: &[Element]) -> Option<PatternCopy> {
        self.accepts(a).map(|(image_vertices, image_colors)| PatternCopy {
            pattern: self.pattern.clone(),
            projection: Projection(a.to_vec()),
            image_vertices,
            image_colors,
        })
    }
}

/// Looks for a copy of a well-distributed pattern: `attempts` seeded random
/// projections first, then exhaustive enumeration when `n^k` is within
/// [`ENUMERATION_CAP`]. `Nonexistent` is returned only after the exhaustive
/// pass.
pub fn find_copy(pattern: &Pattern, targets: &CopyTargets, seed: u64, attempts: u64) -> Result<Outcome<PatternCopy>> {
    if pattern.size() > MAX_PATTERN_SIZE {
        return Err(Error::precondition(format!("pattern has more than {MAX_PATTERN_SIZE} vertices and edges")));
    }
    if !pattern.is_well_distributed() {
        return Err(Error::precondition("pattern is not well-distributed"));
    }
    let g = &pattern.group;
    if targets.vertex_ok.len() != g.n() {
        return Err(Error::domain("targets were built for a different group"));
    }
    let checker = CopyChecker::new(pattern, targets);
    let k = pattern.num_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = vec![Element::IDENTITY; k];
    let n = g.order();
    for _ in 0..attempts {
        a.iter_mut().for_each(|x| *x = Element::from_index_unchecked(rng.gen_range(0..n)));
        if let Some(c) = checker.copy(&a) {
            return Ok(Outcome::Found(c));
        }
        if k == 0 {
            return Ok(Outcome::Nonexistent);
        }
    }
    if projection_count(g, k).is_err() {
        return Ok(Outcome::Unknown);
    }
    let mut found = None;
    for_each_assignment(g, k, |a| {
        found = checker.copy(a);
        found.is_some()
    })?;
    Ok(found.map_or(Outcome::Nonexistent, Outcome::Found))
}

impl PatternCopy {
    /// Re-derives every image from the projection and re-checks separation,
    /// pool membership, constant fixing and edge colours.
    pub fn verify(&self, targets: &CopyTargets) -> std::result::Result<(), String> {
        let p = &self.pattern;
        if !p.is_well_distributed() {
            return Err("pattern is not well-distributed".into());
        }
        if self.projection.k() < p.num_vars() {
            return Err("projection does not cover every variable".into());
        }
        validate(&p.group, &self.projection.0).map_err(|e| e.to_string())?;
        let (verts, colors) = CopyChecker::new(p, targets)
            .accepts(&self.projection.0)
            .ok_or("projection violates separation or pool constraints")?;
        if verts != self.image_vertices || colors != self.image_colors {
            return Err("recorded images disagree with the projection".into());
        }
        for (w, x) in p.vertices.iter().zip(&verts).chain(p.edges.iter().map(|e| &e.label).zip(&colors)) {
            if w.is_constant() && w.constant != *x {
                return Err(format!("constant label {w} moved to {x}"));
            }
        }
        let sub = copy_to_subgraph(self);
        for e in &sub.edges {
            if p.group.sub(e.from, e.to) != e.color {
                return Err(format!("edge {}->{} is not coloured {}", e.from, e.to, e.color));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColoredEdge {
    pub from: Element,
    pub to: Element,
    pub color: Element,
}

/// A subgraph of the Cayley digraph, where edge `(a, b)` has colour `a − b`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgraph {
    pub vertices: Vec<Element>,
    pub edges: Vec<ColoredEdge>,
}

pub fn copy_to_subgraph(c: &PatternCopy) -> Subgraph {
    Subgraph {
        vertices: c.image_vertices.clone(),
        edges: c
            .pattern
            .edges
            .iter()
            .zip(&c.image_colors)
            .map(|(e, &color)| ColoredEdge { from: c.image_vertices[e.from], to: c.image_vertices[e.to], color })
            .collect(),
    }
}

/// Empirical rate at which [`find_copy`] succeeds when vertex and colour
/// pools are independent `p`-random subsets and a uniformly random
/// `forbidden_size`-set is excluded. Trial seeds derive from `seed`.
pub fn probe_gadget_availability(
    pattern: &Pattern,
    p_random: f64,
    forbidden_size: usize,
    trials: u64,
    seed: u64,
    attempts: u64,
) -> Result<RateReport> {
    if trials == 0 {
        return Err(Error::precondition("at least one trial"));
    }
    if !(0.0..=1.0).contains(&p_random) {
        return Err(Error::precondition("p must lie in [0, 1]"));
    }
    let g = &pattern.group;
    if forbidden_size > g.n() {
        return Err(Error::precondition("forbidden set larger than the group"));
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<Element> = g.elements().collect();
    let mut successes = 0;
    for _ in 0..trials {
        let trial_seed: u64 = master.gen();
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let vertex_pool: Vec<Element> = all.iter().copied().filter(|_| rng.gen_bool(p_random)).collect();
        let color_pool: Vec<Element> = all.iter().copied().filter(|_| rng.gen_bool(p_random)).collect();
        let forbidden = rand::seq::index::sample(&mut rng, g.n(), forbidden_size)
            .into_iter()
            .map(|i| all[i])
            .collect::<Vec<_>>();
        let targets = CopyTargets::new(g, &vertex_pool, &color_pool, &forbidden)?;
        if find_copy(pattern, &targets, rng.gen(), attempts)?.is_found() {
            successes += 1;
        }
    }
    Ok(RateReport::new(successes, trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequencing::walk_out;

    fn z(n: u32) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    fn el(x: u32) -> Element {
        Element::from_index_unchecked(x)
    }

    fn w(g: &GroupSpec, s: &str) -> Word {
        Word::parse(g, s).unwrap()
    }

    #[test]
    fn word_literals_round_trip() {
        let g = z(7);
        let x = w(&g, "v1 + v2 + (3)");
        assert_eq!(x.coeff(1), 1);
        assert_eq!(x.constant_part(), el(3));
        assert_eq!(x.to_string(), "v1 + v2 + (3)");
        assert_eq!(w(&g, "2*v1 - v3").to_string(), "2*v1 - v3");
        assert_eq!(w(&g, "-v1").to_string(), "-v1");
        assert_eq!(w(&g, "v1 - (1)").to_string(), "v1 + (6)");
        assert_eq!(w(&g, "v1 - v1"), Word::constant(Element::IDENTITY));
        assert_eq!(w(&g, "(0)").to_string(), "(0)");
        assert_eq!(w(&g, "3v2"), Word::term(2, 3));
        for bad in ["", "v0", "2*", "v1 +", "(7)", "(x)", "v1 v2", "5", "*v1"] {
            assert!(Word::parse(&g, bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn word_classification() {
        let g = z(5);
        assert!(w(&g, "(2)").is_constant());
        assert!(w(&g, "v1 - v2").is_linear());
        assert!(!w(&g, "2*v1 + v2").is_linear());
        assert!(w(&g, "2*v1 + v2").is_linear_in_some());
        assert!(!w(&g, "2*v1").is_linear_in_some());
    }

    #[test]
    fn separability_examples() {
        let g = z(5);
        assert_eq!(word_is_separable_pair(&w(&g, "v1"), &w(&g, "2*v1"), &g), Some(Separability::Linear));
        assert_eq!(
            word_is_separable_pair(&w(&g, "(1)"), &w(&g, "(2)"), &g),
            Some(Separability::NonzeroConstant)
        );
        assert_eq!(
            word_is_separable_pair(&w(&g, "3*v1"), &w(&g, "2*v2"), &g),
            Some(Separability::ThreeTwo)
        );
        assert_eq!(word_is_separable_pair(&w(&g, "v1"), &w(&g, "v1"), &g), None);
        assert_eq!(word_is_separable_pair(&w(&g, "v1"), &w(&g, "3*v1"), &g), None);
    }

    #[test]
    fn projection_counts() {
        assert_eq!(count_projections_fixing(&w(&z(3), "v1 + v2"), el(0), &z(3), 2).unwrap(), 3);
        assert_eq!(count_projections_fixing(&w(&z(3), "v1"), el(2), &z(3), 1).unwrap(), 1);
        assert_eq!(count_projections_fixing(&w(&z(5), "v1 - v2"), el(2), &z(5), 2).unwrap(), 5);
        assert!(count_projections_fixing(&w(&z(5), "2*v1"), el(2), &z(5), 1).is_err());
        assert!(count_projections_fixing(&w(&z(5), "v3"), el(2), &z(5), 2).is_err());
        assert!(matches!(
            count_projections_fixing(&w(&z(101), "v1"), el(0), &z(101), 4),
            Err(Error::Budget { .. })
        ));

        let g = z(5);
        assert_eq!(count_non_separating_projections(&[w(&g, "v1"), w(&g, "2*v1")], &g, 1).unwrap(), 1);
        let g = z(3);
        assert_eq!(count_non_separating_projections(&[w(&g, "v1"), w(&g, "v2")], &g, 2).unwrap(), 3);
        assert_eq!(count_non_separating_projections(&[w(&g, "v1"), w(&g, "3*v1")], &g, 1).unwrap(), 0);
        assert_eq!(all_projections(&z(4), 2).unwrap().len(), 16);
    }

    #[test]
    fn built_in_patterns() {
        let g = z(7);
        let colors = [el(1), el(2)];
        let p = Pattern::path(&g, &colors).unwrap();
        assert!(p.validate() && p.is_well_distributed());
        assert_eq!(p.vertices.len(), 3);
        let c = Pattern::cycle(&g, &[el(1), el(2), el(4)]).unwrap();
        assert!(c.validate() && c.is_well_distributed());
        assert_eq!(c.edges.last().unwrap().to, 0);
        assert!(Pattern::path(&g, &[el(1), el(2), el(4)]).is_err());
    }

    #[test]
    fn invalid_patterns() {
        let g = z(7);
        let dup = Pattern { group: g.clone(), vertices: vec![Word::var(1), Word::var(1)], edges: vec![] };
        assert!(!dup.validate());
        let nonlinear = Pattern {
            group: g.clone(),
            vertices: vec![w(&g, "3*v1"), w(&g, "v1")],
            edges: vec![PatternEdge { from: 0, to: 1, label: w(&g, "2*v1") }],
        };
        assert!(nonlinear.validate());
        assert!(!nonlinear.is_well_distributed());
        let wrong = Pattern {
            group: g.clone(),
            vertices: vec![w(&g, "v1"), w(&g, "v2")],
            edges: vec![PatternEdge { from: 0, to: 1, label: w(&g, "v1") }],
        };
        assert!(!wrong.validate());
    }

    #[test]
    fn copies_of_path_and_cycle() {
        let g = z(7);
        let p = Pattern::path(&g, &[el(1), el(2)]).unwrap();
        let all = CopyTargets::whole_group(&g);
        let c = find_copy(&p, &all, 0, 100).unwrap().found().unwrap();
        c.verify(&all).unwrap();
        let sub = copy_to_subgraph(&c);
        let v = c.projection.0[0];
        assert_eq!(sub.vertices, walk_out(&g, v, &[el(1), el(2)]));

        let cyc = Pattern::cycle(&g, &[el(1), el(2), el(4)]).unwrap();
        let c = find_copy(&cyc, &all, 3, 100).unwrap().found().unwrap();
        c.verify(&all).unwrap();
        let sub = copy_to_subgraph(&c);
        assert_eq!(sub.edges.iter().map(|e| e.color).collect::<Vec<_>>(), vec![el(1), el(2), el(4)]);
        assert_eq!(sub.edges[2].to, sub.vertices[0]);
    }

    #[test]
    fn copies_respect_pools() {
        let g = z(7);
        let constants = Pattern {
            group: g.clone(),
            vertices: vec![w(&g, "(3)"), w(&g, "(1)")],
            edges: vec![PatternEdge { from: 0, to: 1, label: w(&g, "(2)") }],
        };
        let t = CopyTargets::new(&g, &[el(3), el(1)], &[el(2)], &[]).unwrap();
        let c = find_copy(&constants, &t, 0, 10).unwrap().found().unwrap();
        assert_eq!(c.image_vertices, vec![el(3), el(1)]);

        let p = Pattern::path(&g, &[el(1), el(2)]).unwrap();
        let t = CopyTargets::new(&g, &[el(0), el(1)], &g.elements().collect::<Vec<_>>(), &[]).unwrap();
        assert_eq!(find_copy(&p, &t, 0, 100).unwrap(), Outcome::Nonexistent);

        let empty = Pattern { group: g.clone(), vertices: vec![], edges: vec![] };
        let c = find_copy(&empty, &t, 0, 1).unwrap().found().unwrap();
        assert_eq!(copy_to_subgraph(&c), Subgraph::default());
    }

    #[test]
    fn pattern_json_round_trip() {
        let g = z(7);
        let p = Pattern::cycle(&g, &[el(1), el(2), el(4)]).unwrap();
        let text = p.to_json().to_string();
        assert_eq!(Pattern::from_json(&text).unwrap(), p);
        assert!(Pattern::from_json("{\"group\":\"Z7\"}").is_err());
    }

    #[test]
    fn probe_extremes() {
        let g = z(11);
        let p = Pattern::path(&g, &[el(1), el(2)]).unwrap();
        let r = probe_gadget_availability(&p, 1.0, 0, 5, 1, 1000).unwrap();
        assert_eq!(r.rate, 1.0);
        let r = probe_gadget_availability(&p, 0.0, 0, 5, 1, 10).unwrap();
        assert_eq!(r.rate, 0.0);
        assert!(probe_gadget_availability(&p, 0.5, 0, 0, 1, 10).is_err());
    }

    #[test]
    fn bound_form() {
        assert!(non_separating_bound_holds(1, 2, 5, 1).unwrap());
        assert!(!non_separating_bound_holds(100, 1, 5, 1).unwrap());
    }
}
