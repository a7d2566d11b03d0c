//! Tuples of group elements read as colour sequences of walks in the Cayley
//! digraph: path/cycle-candidate tests, ordering search, and the
//! dissociability and distance-separability predicates.
//!
//! Predicates take a `&GroupSpec` plus a slice of elements assumed to belong
//! to it; use [`ColorSequence::new`] or [`validate`] on untrusted input.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};

/// An ordered tuple of elements of one group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorSequence {
    group: GroupSpec,
    entries: Vec<Element>,
}

impl ColorSequence {
    pub fn new(group: GroupSpec, entries: Vec<Element>) -> Result<Self> {
        validate(&group, &entries)?;
        Ok(ColorSequence { group, entries })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `partial_sum(j)` for `j = 0..=len`.
    pub fn partial_sum(&self, j: usize) -> Element {
        self.group.sum(self.entries[..j].iter().copied())
    }

    /// Parses the rendering `Z7:[1,2,4]`.
    pub fn parse(input: &str) -> Result<Self> {
        let (group, list) = input
            .split_once(':')
            .ok_or_else(|| Error::parse("expected <group>:[i,j,...]"))?;
        let group = GroupSpec::parse(group)?;
        let entries = parse_index_list(&group, list)?;
        Ok(ColorSequence { group, entries })
    }
}

impl fmt::Display for ColorSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:[", self.group)?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Parses `[1,2,4]` (brackets optional) into elements of `group`.
pub fn parse_index_list(group: &GroupSpec, list: &str) -> Result<Vec<Element>> {
    let body = list.trim();
    let body = body.strip_prefix('[').unwrap_or(body);
    let body = body.strip_suffix(']').unwrap_or(body).trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let i: u64 = tok
                .parse()
                .map_err(|_| Error::parse(format!("bad element index {tok:?}")))?;
            group.element(i)
        })
        .collect()
}

pub fn validate(group: &GroupSpec, entries: &[Element]) -> Result<()> {
    entries.iter().try_for_each(|&e| group.check(e).map(|_| ()))
}

/// The `k + 1` partial sums `Σ_{i<j} c_i` for `j = 0..=k`.
pub fn partial_sums(group: &GroupSpec, c: &[Element]) -> Vec<Element> {
    let mut out = Vec::with_capacity(c.len() + 1);
    let mut acc = Element::IDENTITY;
    out.push(acc);
    for &x in c {
        acc = group.add(acc, x);
        out.push(acc);
    }
    out
}

/// `(v, v − c_1, v − c_1 − c_2, …)`: the walk following out-edges coloured `c`.
pub fn walk_out(group: &GroupSpec, v: Element, c: &[Element]) -> Vec<Element> {
    partial_sums(group, c).into_iter().map(|s| group.sub(v, s)).collect()
}

/// `(v, v + c_1, v + c_1 + c_2, …)`: the walk following in-edges coloured `c`.
pub fn walk_in(group: &GroupSpec, v: Element, c: &[Element]) -> Vec<Element> {
    partial_sums(group, c).into_iter().map(|s| group.add(v, s)).collect()
}

fn all_distinct(items: &[Element]) -> bool {
    let mut seen = HashSet::with_capacity(items.len());
    items.iter().all(|e| seen.insert(*e))
}

/// All `k + 1` partial sums (including the empty one) pairwise distinct.
pub fn is_path_candidate(group: &GroupSpec, c: &[Element]) -> bool {
    all_distinct(&partial_sums(group, c))
}

/// The proper prefix is a path-candidate and the total is the identity.
pub fn is_cycle_candidate(group: &GroupSpec, c: &[Element]) -> Result<bool> {
    if c.len() < 2 {
        return Err(Error::domain("cycle-candidates need at least two entries"));
    }
    let (last, prefix) = c.split_last().expect("len >= 2");
    let sums = partial_sums(group, prefix);
    Ok(all_distinct(&sums) && group.add(*sums.last().expect("nonempty"), *last).is_identity())
}

pub fn is_rainbow(c: &[Element]) -> bool {
    all_distinct(c)
}

fn check_set(group: &GroupSpec, set: &[Element]) -> Result<Vec<Element>> {
    validate(group, set)?;
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.first().is_some_and(|e| e.is_identity()) {
        return Err(Error::IdentityPresent);
    }
    Ok(s)
}

/// Depth-first search over orderings of `set`, in index order, keeping the
/// first `checked` partial sums distinct. The remaining positions are filled
/// without checks.
fn search_ordering(group: &GroupSpec, set: &[Element], checked: usize) -> Option<Vec<Element>> {
    fn go(
        group: &GroupSpec,
        set: &[Element],
        checked: usize,
        used: &mut [bool],
        seen: &mut HashSet<Element>,
        acc: Element,
        out: &mut Vec<Element>,
    ) -> bool {
        if out.len() == set.len() {
            return true;
        }
        let check = out.len() < checked;
        for i in 0..set.len() {
            if used[i] {
                continue;
            }
            let next = group.add(acc, set[i]);
            if check && seen.contains(&next) {
                continue;
            }
            used[i] = true;
            if check {
                seen.insert(next);
            }
            out.push(set[i]);
            if go(group, set, checked, used, seen, next, out) {
                return true;
            }
            out.pop();
            if check {
                seen.remove(&next);
            }
            used[i] = false;
        }
        false
    }
    let mut used = vec![false; set.len()];
    let mut seen = HashSet::from([Element::IDENTITY]);
    let mut out = Vec::with_capacity(set.len());
    go(group, set, checked, &mut used, &mut seen, Element::IDENTITY, &mut out).then_some(out)
}

/// Orders an identity-free zero-sum set as a rainbow cycle-candidate.
/// Returns `None` only when every ordering has been ruled out.
pub fn order_as_cycle_candidate(group: &GroupSpec, set: &[Element]) -> Result<Option<Vec<Element>>> {
    let s = check_set(group, set)?;
    let total = group.sum(s.iter().copied());
    if !total.is_identity() {
        return Err(Error::SumMismatch { actual: total.raw(), required: 0 });
    }
    if s.len() < 2 {
        return Err(Error::precondition("cycle-candidates need at least two entries"));
    }
    Ok(search_ordering(group, &s, s.len() - 1))
}

/// Orders an identity-free set as a rainbow path-candidate, if possible.
pub fn order_as_path_candidate(group: &GroupSpec, set: &[Element]) -> Result<Option<Vec<Element>>> {
    let s = check_set(group, set)?;
    Ok(search_ordering(group, &s, s.len()))
}

fn dissociable_up_to(group: &GroupSpec, family: &[Vec<Element>], depth: impl Fn(usize) -> usize) -> Result<bool> {
    let Some(k) = family.first().map(Vec::len) else {
        return Ok(true);
    };
    if family.iter().any(|s| s.len() != k) {
        return Err(Error::domain("sequences in a family must share one length"));
    }
    let limit = depth(k);
    let mut owner: std::collections::HashMap<Element, usize> = Default::default();
    for (id, seq) in family.iter().enumerate() {
        let mut acc = Element::IDENTITY;
        for &x in &seq[..limit] {
            acc = group.add(acc, x);
            match owner.get(&acc) {
                Some(&other) if other != id => return Ok(false),
                Some(_) => {}
                None => {
                    owner.insert(acc, id);
                }
            }
        }
    }
    Ok(true)
}

/// No nonempty prefix sum of one member equals a nonempty prefix sum of
/// another.
pub fn is_dissociable(group: &GroupSpec, family: &[Vec<Element>]) -> Result<bool> {
    dissociable_up_to(group, family, |k| k)
}

/// As [`is_dissociable`], restricted to prefixes of length at most `k − 1`.
pub fn is_near_dissociable(group: &GroupSpec, family: &[Vec<Element>]) -> Result<bool> {
    dissociable_up_to(group, family, |k| k.saturating_sub(1))
}

/// For all nonempty prefixes, `Σc[..j] + Σb[..j'] ∉ {−d, d}`.
pub fn separable_at_distance(group: &GroupSpec, c: &[Element], b: &[Element], d: Element) -> bool {
    let minus_d = group.neg(d);
    let cs = partial_sums(group, c);
    let bs = partial_sums(group, b);
    cs[1..].iter().all(|&x| {
        bs[1..].iter().all(|&y| {
            let s = group.add(x, y);
            s != d && s != minus_d
        })
    })
}
