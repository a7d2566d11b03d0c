//! Orthomorphism searches (any, prescribed cycle type, FGT shape), the
//! matchability decision for linear systems over `G`, and the sweep plan
//! used to re-check small groups.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::budget::{Meter, Outcome, Search, SearchBudget};
use crate::error::{Error, Result};
use crate::exact_cover::ExactCover;
use crate::group::{enumerate_abelian_groups, Element, GroupSpec};
use crate::rainbow::{perfect_matching, ColoredDigraphView, Matching};
use crate::zerosum::{tannenbaum_partition, zero_sum_equipartition, zero_sum_partition};

/// A bijection `φ` of `G` with `g ↦ φ(g) − g` also bijective; `perm[i]` is
/// the image of the element with index `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orthomorphism {
    pub group: GroupSpec,
    pub perm: Vec<Element>,
}

impl Orthomorphism {
    pub fn verify(&self) -> std::result::Result<(), Violation> {
        verify_orthomorphism(&self.group, &self.perm)
    }

    pub fn cycle_type(&self) -> CycleType {
        cycle_type(&self.perm)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("map has {got} entries, group has {expected} elements")]
    Length { expected: usize, got: usize },
    #[error("image {value} of element {at} is not in the group")]
    OutOfRange { at: Element, value: Element },
    #[error("not a permutation: {a} and {b} both map to {image}")]
    ImageCollision { a: Element, b: Element, image: Element },
    #[error("differences collide: φ(g) − g = {difference} for g = {a} and g = {b}")]
    DifferenceCollision { a: Element, b: Element, difference: Element },
}

/// Checks that `perm` and `g ↦ perm(g) − g` are both bijections, reporting
/// the first collision found.
pub fn verify_orthomorphism(g: &GroupSpec, perm: &[Element]) -> std::result::Result<(), Violation> {
    let n = g.n();
    if perm.len() != n {
        return Err(Violation::Length { expected: n, got: perm.len() });
    }
    let mut image_of = vec![None; n];
    let mut diff_of = vec![None; n];
    for (a, &y) in g.elements().zip(perm) {
        if !g.contains(y) {
            return Err(Violation::OutOfRange { at: a, value: y });
        }
        if let Some(b) = image_of[y.index()].replace(a) {
            return Err(Violation::ImageCollision { a: b, b: a, image: y });
        }
        let d = g.sub(y, a);
        if let Some(b) = diff_of[d.index()].replace(a) {
            return Err(Violation::DifferenceCollision { a: b, b: a, difference: d });
        }
    }
    Ok(())
}

/// Cycle lengths of a permutation with their multiplicities; length 1
/// counts fixed points.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    counts: BTreeMap<usize, usize>,
}

impl CycleType {
    pub fn from_lengths(lengths: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for l in lengths {
            if l == 0 {
                return Err(Error::domain("cycle lengths must be at least 1"));
            }
            *counts.entry(l).or_insert(0) += 1;
        }
        Ok(CycleType { counts })
    }

    /// One fixed point and `(n − 1)/k` cycles of length `k`.
    pub fn fgt(n: usize, k: usize) -> Result<Self> {
        if k < 2 || n == 0 || !(n - 1).is_multiple_of(k) {
            return Err(Error::Divisibility(format!("{k} does not divide {}", n.saturating_sub(1))));
        }
        Self::from_lengths(std::iter::once(1).chain(std::iter::repeat_n(k, (n - 1) / k)))
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn fixed_points(&self) -> usize {
        self.counts.get(&1).copied().unwrap_or(0)
    }

    /// Lengths of the non-trivial cycles, ascending, with repetition.
    pub fn long_cycles(&self) -> Vec<usize> {
        self.counts
            .iter()
            .filter(|(&l, _)| l > 1)
            .flat_map(|(&l, &c)| std::iter::repeat_n(l, c))
            .collect()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|(l, c)| l * c).sum()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return f.write_str("0");
        }
        for (i, (l, c)) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if *c == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}^{c}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for CycleType {
    type Err = Error;

    /// Parses terms like `1+3^2` or `1 + 2 + 4`.
    fn from_str(s: &str) -> Result<Self> {
        let mut lengths = Vec::new();
        for term in s.split('+') {
            let term = term.trim();
            let (l, c) = match term.split_once('^') {
                Some((l, c)) => (l.trim(), c.trim()),
                None => (term, "1"),
            };
            let parse = |t: &str| -> Result<usize> {
                if t.is_empty() || t.len() > 6 || !t.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::parse(format!("bad cycle-type term {term:?}")));
                }
                Ok(t.parse().expect("digits"))
            };
            let (l, c) = (parse(l)?, parse(c)?);
            if l == 0 || c == 0 {
                return Err(Error::parse(format!("bad cycle-type term {term:?}")));
            }
            if lengths.len() + c > 1_000_000 {
                return Err(Error::parse("cycle type too large"));
            }
            lengths.extend(std::iter::repeat_n(l, c));
        }
        CycleType::from_lengths(lengths)
    }
}

/// Cycle type by orbit traversal. `perm` must be a permutation of indices.
pub fn cycle_type(perm: &[Element]) -> CycleType {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = perm[x].index();
        }
        lengths.push(len);
    }
    CycleType::from_lengths(lengths).expect("lengths are positive")
}

/// Turns a rainbow cycle factor of `K_G[G \ {0}]` into the orthomorphism
/// fixing zero that sends each vertex to its successor on its cycle.
pub fn orthomorphism_from_factor(g: &GroupSpec, m: &Matching) -> Result<Orthomorphism> {
    let mut perm: Vec<Option<Element>> = vec![None; g.n()];
    perm[0] = Some(Element::IDENTITY);
    for e in &m.edges {
        for (i, &v) in e.cycle.iter().enumerate() {
            let next = e.cycle[(i + 1) % e.cycle.len()];
            if perm[g.check(v)?.index()].replace(next).is_some() {
                return Err(Error::domain(format!("vertex {v} lies on two cycles")));
            }
        }
    }
    let perm: Option<Vec<Element>> = perm.into_iter().collect();
    let perm = perm.ok_or_else(|| Error::domain("cycle factor does not cover G \\ {0}"))?;
    let o = Orthomorphism { group: g.clone(), perm };
    o.verify().map_err(|v| Error::domain(format!("cycle factor gives no orthomorphism: {v}")))?;
    Ok(o)
}

/// Any orthomorphism of `g`, by exact cover over pairs `(x, φ(x))` with
/// items for the domain point, the image and the difference. Translating
/// by `−φ(0)` preserves the property, so `φ(0) = 0` is forced.
pub fn search_any_orthomorphism(g: &GroupSpec, budget: &SearchBudget) -> Search<Orthomorphism> {
    let n = g.n();
    let mut options = Vec::with_capacity(n * n);
    for x in g.elements() {
        for y in g.elements() {
            options.push(vec![x.index(), n + y.index(), 2 * n + g.sub(y, x).index()]);
        }
    }
    let mut dl = ExactCover::new(3 * n, &options);
    assert!(dl.force(&options, 0), "fresh instance");
    dl.solve(budget).map(|rows| {
        // The forced pair (0, 0) is not among the returned rows.
        let mut perm = vec![Element::IDENTITY; n];
        for r in rows {
            perm[r / n] = Element::from_index_unchecked((r % n) as u32);
        }
        Orthomorphism { group: g.clone(), perm }
    })
}

/// Orthomorphism fixing zero whose other cycles all have length `k`,
/// found as a rainbow `C_k`-factor of `K_G[G \ {0}]`.
///
/// Hall-Paige failure and the absence of a zero-sum partition of
/// `G \ {0}` into `k`-sets both refute without a cycle search.
pub fn find_fgt_orthomorphism(g: &GroupSpec, k: usize, budget: &SearchBudget) -> Result<Search<Orthomorphism>> {
    let n = g.n();
    if k < 2 {
        return Err(Error::precondition("k must be at least 2"));
    }
    if !(n - 1).is_multiple_of(k) {
        return Err(Error::Divisibility(format!("{k} does not divide n - 1 = {}", n - 1)));
    }
    if !g.hall_paige() {
        return Ok(Search { outcome: Outcome::Nonexistent, nodes: 0 });
    }
    let nonzero: Vec<Element> = g.nonzero_elements().collect();
    let refute = zero_sum_equipartition(g, &nonzero, k, budget)?;
    let mut nodes = refute.nodes;
    match refute.outcome {
        Outcome::Nonexistent => return Ok(Search { outcome: Outcome::Nonexistent, nodes }),
        Outcome::Unknown => return Ok(Search { outcome: Outcome::Unknown, nodes }),
        Outcome::Found(_) => {}
    }
    let rest = SearchBudget { max_nodes: budget.max_nodes.saturating_sub(nodes), ..*budget };
    let view = ColoredDigraphView::nonzero(g);
    let s = perfect_matching(&view, k, &rest)?;
    nodes += s.nodes;
    let outcome = match s.outcome {
        Outcome::Found(m) => Outcome::Found(orthomorphism_from_factor(g, &m)?),
        Outcome::Nonexistent => Outcome::Nonexistent,
        Outcome::Unknown => Outcome::Unknown,
    };
    Ok(Search { outcome, nodes })
}

/// Budget for each zero-sum feasibility check inside the cycle search.
const PRUNE_NODES: u64 = 2_000;

/// Backtracking directly on `φ`: cycles are grown from the least unplaced
/// element, each step choosing an image whose difference `φ(v) − v` is
/// still free. With `prune`, after each closed cycle the unused
/// differences must still split into zero-sum sets of the remaining
/// lengths.
struct CycleSearch<'a> {
    g: &'a GroupSpec,
    perm: Vec<Element>,
    placed: BitSet,
    used_diff: BitSet,
    lengths: Vec<(usize, usize)>,
    path: Vec<Element>,
    prune: bool,
    meter: Meter,
}

impl CycleSearch<'_> {
    fn solve(&mut self) -> bool {
        if !self.meter.tick() {
            return false;
        }
        let n = self.g.n();
        let Some(x) = (0..n).find(|&i| !self.placed.contains(i)) else {
            return true;
        };
        let x = Element::from_index_unchecked(x as u32);
        self.placed.insert(x.index());
        for s in 0..self.lengths.len() {
            if self.lengths[s].1 == 0 {
                continue;
            }
            self.lengths[s].1 -= 1;
            self.path.push(x);
            let target = self.lengths[s].0;
            if self.extend(target) {
                return true;
            }
            self.path.pop();
            self.lengths[s].1 += 1;
            if self.meter.exhausted() {
                break;
            }
        }
        self.placed.remove(x.index());
        false
    }

    fn extend(&mut self, len: usize) -> bool {
        let g = self.g;
        let cur = *self.path.last().expect("nonempty");
        if self.path.len() == len {
            let start = self.path[0];
            let d = g.sub(start, cur);
            if self.used_diff.contains(d.index()) {
                return false;
            }
            self.used_diff.insert(d.index());
            self.perm[cur.index()] = start;
            let cycle = std::mem::take(&mut self.path);
            let ok = self.feasible() && self.solve();
            self.path = cycle;
            if !ok {
                self.used_diff.remove(d.index());
            }
            return ok;
        }
        for y in g.nonzero_elements() {
            if self.placed.contains(y.index()) {
                continue;
            }
            let d = g.sub(y, cur);
            if self.used_diff.contains(d.index()) {
                continue;
            }
            if !self.meter.tick() {
                return false;
            }
            self.placed.insert(y.index());
            self.used_diff.insert(d.index());
            self.perm[cur.index()] = y;
            self.path.push(y);
            if self.extend(len) {
                return true;
            }
            self.path.pop();
            self.used_diff.remove(d.index());
            self.placed.remove(y.index());
            if self.meter.exhausted() {
                return false;
            }
        }
        false
    }

    fn feasible(&mut self) -> bool {
        if !self.prune {
            return true;
        }
        let sizes: Vec<usize> = self
            .lengths
            .iter()
            .flat_map(|&(l, c)| std::iter::repeat_n(l, c))
            .collect();
        if sizes.len() < 2 {
            return true;
        }
        let free: Vec<Element> = self
            .g
            .nonzero_elements()
            .filter(|d| !self.used_diff.contains(d.index()))
            .collect();
        match zero_sum_partition(self.g, &free, &sizes, &SearchBudget::nodes(PRUNE_NODES)) {
            Ok(s) => !s.outcome.is_nonexistent(),
            Err(_) => true,
        }
    }
}

fn cycle_search(g: &GroupSpec, lengths: &[usize], prune: bool, budget: &SearchBudget) -> Search<Orthomorphism> {
    let n = g.n();
    let mut grouped: Vec<(usize, usize)> = Vec::new();
    let mut sorted = lengths.to_vec();
    sorted.sort_unstable();
    for l in sorted {
        match grouped.last_mut() {
            Some((len, c)) if *len == l => *c += 1,
            _ => grouped.push((l, 1)),
        }
    }
    let mut placed = BitSet::new(n);
    placed.insert(0);
    let mut used_diff = BitSet::new(n);
    used_diff.insert(0);
    let mut s = CycleSearch {
        g,
        perm: vec![Element::IDENTITY; n],
        placed,
        used_diff,
        lengths: grouped,
        path: Vec::new(),
        prune,
        meter: budget.meter(),
    };
    let ok = s.solve();
    let perm = std::mem::take(&mut s.perm);
    s.meter.finish(ok.then(|| Orthomorphism { group: g.clone(), perm }))
}

/// FGT-shaped orthomorphism by backtracking on the permutation itself,
/// independent of the cycle-factor route; used for cross-checks.
pub fn search_fgt_by_permutation(g: &GroupSpec, k: usize, budget: &SearchBudget) -> Result<Search<Orthomorphism>> {
    let t = CycleType::fgt(g.n(), k)?;
    Ok(cycle_search(g, &t.long_cycles(), false, budget))
}

/// Orthomorphism with cycle type `t`, which must have exactly one fixed
/// point (necessarily zero) and cover `G`. A zero-sum partition of
/// `G \ {0}` with the cycle lengths is checked first, then an exact cycle
/// search with the same check repeated on the unused differences.
pub fn find_cycle_type_orthomorphism(
    g: &GroupSpec,
    t: &CycleType,
    budget: &SearchBudget,
) -> Result<Search<Orthomorphism>> {
    if t.fixed_points() != 1 {
        return Err(Error::domain(format!("cycle type {t} must have exactly one fixed point")));
    }
    if t.total() != g.n() {
        return Err(Error::domain(format!("cycle type {t} covers {} elements, group has {}", t.total(), g.n())));
    }
    let lengths = t.long_cycles();
    if lengths.is_empty() {
        // Only the trivial group, whose identity map qualifies.
        return Ok(Search {
            outcome: Outcome::Found(Orthomorphism { group: g.clone(), perm: vec![Element::IDENTITY] }),
            nodes: 0,
        });
    }
    let pre = tannenbaum_partition(g, &lengths, budget)?;
    let mut nodes = pre.nodes;
    match pre.outcome {
        Outcome::Nonexistent => return Ok(Search { outcome: Outcome::Nonexistent, nodes }),
        Outcome::Unknown => return Ok(Search { outcome: Outcome::Unknown, nodes }),
        Outcome::Found(_) => {}
    }
    let rest = SearchBudget { max_nodes: budget.max_nodes.saturating_sub(nodes), ..*budget };
    let s = cycle_search(g, &lengths, true, &rest);
    nodes += s.nodes;
    Ok(Search { outcome: s.outcome, nodes })
}

/// Integer matrix `A` with `ℓ` rows and `m ≥ 1` columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct EquationSystem {
    rows: Vec<Vec<i64>>,
}

impl TryFrom<Vec<Vec<i64>>> for EquationSystem {
    type Error = Error;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<EquationSystem> for Vec<Vec<i64>> {
    fn from(a: EquationSystem) -> Self {
        a.rows
    }
}

/// Largest absolute coefficient accepted.
pub const MAX_COEFFICIENT: i64 = 1_000_000;

impl EquationSystem {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || m == 0 {
            return Err(Error::domain("need at least one row and one column"));
        }
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::domain("rows differ in length"));
        }
        if rows.iter().flatten().any(|a| a.abs() > MAX_COEFFICIENT) {
            return Err(Error::domain(format!("coefficients must lie within ±{MAX_COEFFICIENT}")));
        }
        Ok(EquationSystem { rows })
    }

    /// `[[1, −1, −1]]`: `v_1 = v_2 + v_3`, matchable exactly when `G` has an
    /// orthomorphism.
    pub fn hall_paige() -> Self {
        EquationSystem { rows: vec![vec![1, -1, -1]] }
    }

    /// Toroidal queens: `v_3 = v_1 + v_2`, `v_4 = v_1 − v_2`.
    pub fn queens() -> Self {
        EquationSystem { rows: vec![vec![1, 1, -1, 0], vec![1, -1, 0, -1]] }
    }

    /// Parses `"1,-1,-1;1,1,-1,0"`: rows split by `;`, entries by `,`.
    pub fn parse(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|a| {
                        let a = a.trim();
                        if a.len() > 12 {
                            return Err(Error::parse(format!("coefficient {a:?} too long")));
                        }
                        a.parse::<i64>().map_err(|_| Error::parse(format!("bad coefficient {a:?}")))
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn columns(&self) -> usize {
        self.rows[0].len()
    }

    pub fn satisfied_by(&self, g: &GroupSpec, v: &[Element]) -> bool {
        self.rows
            .iter()
            .all(|r| g.sum(r.iter().zip(v).map(|(&a, &x)| g.mul(a, x))).is_identity())
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&rows.join(";"))
    }
}

/// Kernel enumeration cap for [`matchable`].
pub const KERNEL_CAP: u128 = 10_000_000;

/// Decides whether `n` solutions of `A·v = 0` in `G^m` exist whose `i`-th
/// coordinates run over all of `G`, for each `i`. The witness lists, per
/// coordinate, the values taken by the chosen vectors; vectors are sorted
/// by their first coordinate.
///
/// Exact cover over the kernel vectors. Adding a kernel vector to every
/// chosen vector preserves the property, so the zero vector is forced.
pub fn matchable(a: &EquationSystem, g: &GroupSpec, budget: &SearchBudget) -> Result<Search<Vec<Vec<Element>>>> {
    let n = g.n();
    let m = a.columns();
    let space = (n as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if space > KERNEL_CAP {
        return Err(Error::Budget { size: space, cap: KERNEL_CAP });
    }
    let mut kernel: Vec<Vec<Element>> = Vec::new();
    let mut v = vec![Element::IDENTITY; m];
    loop {
        if a.satisfied_by(g, &v) {
            kernel.push(v.clone());
        }
        let Some(i) = (0..m).rev().find(|&i| v[i].index() + 1 < n) else {
            break;
        };
        v[i] = Element::from_index_unchecked(v[i].raw() + 1);
        v[i + 1..].iter_mut().for_each(|x| *x = Element::IDENTITY);
    }
    let options: Vec<Vec<usize>> = kernel
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, x)| i * n + x.index()).collect())
        .collect();
    let mut dl = ExactCover::new(m * n, &options);
    assert!(dl.force(&options, 0), "the zero vector comes first");
    Ok(dl.solve(budget).map(|rows| {
        // The forced zero vector is not among the returned rows.
        let mut chosen: Vec<&Vec<Element>> = std::iter::once(0).chain(rows).map(|r| &kernel[r]).collect();
        chosen.sort();
        (0..m).map(|i| chosen.iter().map(|v| v[i]).collect()).collect()
    }))
}

/// Re-checks a matchability witness: `m` columns of length `n`, each a
/// permutation of `G`, with every vector `(w_1[j], …, w_m[j])` in the kernel.
pub fn verify_matchable_witness(
    a: &EquationSystem,
    g: &GroupSpec,
    witness: &[Vec<Element>],
) -> std::result::Result<(), String> {
    let n = g.n();
    if witness.len() != a.columns() {
        return Err(format!("{} coordinates, system has {}", witness.len(), a.columns()));
    }
    for (i, col) in witness.iter().enumerate() {
        if col.len() != n {
            return Err(format!("coordinate {i} has {} entries, expected {n}", col.len()));
        }
        let mut seen = vec![false; n];
        for &x in col {
            if !g.contains(x) {
                return Err(format!("coordinate {i} holds out-of-range element {x}"));
            }
            if std::mem::replace(&mut seen[x.index()], true) {
                return Err(format!("coordinate {i} repeats {x}"));
            }
        }
    }
    for j in 0..n {
        let v: Vec<Element> = witness.iter().map(|c| c[j]).collect();
        if !a.satisfied_by(g, &v) {
            return Err(format!("vector {j} = {v:?} violates the system"));
        }
    }
    Ok(())
}

/// One unit of work in an FGT sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepEntry {
    Cell { group: GroupSpec, k: usize },
    Skipped { group: GroupSpec, reason: String },
}

/// Every abelian group of order `2..=max_order` in enumeration order; each
/// group satisfying Hall-Paige contributes one cell per `k ≥ 2` dividing
/// `n − 1`.
pub fn sweep_plan(max_order: u32) -> Result<Vec<SweepEntry>> {
    if max_order < 2 {
        return Err(Error::domain("max order must be at least 2"));
    }
    let mut plan = Vec::new();
    for n in 2..=max_order {
        for group in enumerate_abelian_groups(n) {
            if !group.hall_paige() {
                plan.push(SweepEntry::Skipped { group, reason: "Hall-Paige fails".into() });
                continue;
            }
            let ks: Vec<usize> = (2..n as usize).filter(|k| (n as usize - 1).is_multiple_of(*k)).collect();
            if ks.is_empty() {
                plan.push(SweepEntry::Skipped { group, reason: "no k >= 2 divides n - 1".into() });
                continue;
            }
            plan.extend(ks.into_iter().map(|k| SweepEntry::Cell { group: group.clone(), k }));
        }
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rainbow::{perfect_matching_materialized, perfect_matching_search};

    fn z(n: u32) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    fn els(xs: &[u32]) -> Vec<Element> {
        xs.iter().map(|&x| Element::from_index_unchecked(x)).collect()
    }

    fn all_perms(n: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn verifier_examples() {
        let g = z(3);
        assert!(matches!(
            verify_orthomorphism(&g, &els(&[0, 1, 2])),
            Err(Violation::DifferenceCollision { .. })
        ));
        assert_eq!(verify_orthomorphism(&g, &els(&[0, 2, 1])), Ok(()));
        assert!(matches!(
            verify_orthomorphism(&g, &els(&[0, 0, 1])),
            Err(Violation::ImageCollision { image, .. }) if image == Element::IDENTITY
        ));
        assert!(matches!(verify_orthomorphism(&g, &els(&[0, 1])), Err(Violation::Length { .. })));
        let z4 = z(4);
        assert!(all_perms(4).iter().all(|p| verify_orthomorphism(&z4, &els(p)).is_err()));
    }

    #[test]
    fn cycle_types() {
        let t: CycleType = "1+3^2".parse().unwrap();
        assert_eq!(t.to_string(), "1+3^2");
        assert_eq!(t.long_cycles(), vec![3, 3]);
        assert_eq!(t, CycleType::fgt(7, 3).unwrap());
        assert_eq!(" 1 + 2 + 4".parse::<CycleType>().unwrap().to_string(), "1+2+4");
        for bad in ["", "0", "1+", "3^0", "x", "1^^2", "-1"] {
            assert!(bad.parse::<CycleType>().is_err(), "{bad}");
        }
        assert_eq!(cycle_type(&els(&[0, 2, 1])).to_string(), "1+2");
        assert!(CycleType::fgt(7, 4).is_err());
    }

    #[test]
    fn factor_conversion_calibrates_on_z3() {
        let g = z(3);
        let m = perfect_matching_search(&ColoredDigraphView::nonzero(&g), 2, &SearchBudget::default())
            .unwrap()
            .found()
            .unwrap();
        let o = orthomorphism_from_factor(&g, &m).unwrap();
        assert_eq!(o.perm, els(&[0, 2, 1]));
    }

    #[test]
    fn fgt_examples() {
        let b = SearchBudget::default();
        for (n, k) in [(7, 3), (7, 2), (7, 6), (13, 4)] {
            let g = z(n);
            let o = find_fgt_orthomorphism(&g, k, &b).unwrap().found().unwrap();
            assert_eq!(o.verify(), Ok(()));
            assert_eq!(o.cycle_type(), CycleType::fgt(n as usize, k).unwrap());
        }
        assert_eq!(find_fgt_orthomorphism(&z(4), 3, &b).unwrap().outcome, Outcome::Nonexistent);
        assert!(matches!(find_fgt_orthomorphism(&z(7), 4, &b), Err(Error::Divisibility(_))));
    }

    #[test]
    fn three_routes_agree() {
        let b = SearchBudget::default();
        for (n, k) in [(7, 3), (7, 2), (9, 4), (4, 3)] {
            let g = z(n);
            let view = ColoredDigraphView::nonzero(&g);
            let a = search_fgt_by_permutation(&g, k, &b).unwrap();
            let c = perfect_matching_search(&view, k, &b).unwrap();
            let d = perfect_matching_materialized(&view, k, &b, 1_000_000).unwrap();
            assert_eq!(a.outcome.is_found(), c.outcome.is_found(), "Z{n} k={k}");
            assert_eq!(a.outcome.is_found(), d.outcome.is_found(), "Z{n} k={k}");
            if let Some(o) = a.found() {
                assert_eq!(o.verify(), Ok(()));
            }
        }
    }

    #[test]
    fn cycle_type_examples() {
        let b = SearchBudget::default();
        let g = z(7);
        let o = find_cycle_type_orthomorphism(&g, &"1+3^2".parse().unwrap(), &b).unwrap().found().unwrap();
        assert_eq!(o.cycle_type().to_string(), "1+3^2");
        let s = find_cycle_type_orthomorphism(&g, &"1+2+4".parse().unwrap(), &b).unwrap();
        assert!(!matches!(s.outcome, Outcome::Unknown));
        if let Some(o) = s.found() {
            assert_eq!(o.verify(), Ok(()));
            assert_eq!(o.cycle_type().to_string(), "1+2+4");
        }
        let o = find_cycle_type_orthomorphism(&z(5), &"1+4".parse().unwrap(), &b).unwrap();
        let brute = all_perms(5).into_iter().any(|p| {
            let p = els(&p);
            verify_orthomorphism(&z(5), &p).is_ok() && cycle_type(&p).to_string() == "1+4"
        });
        assert_eq!(o.outcome.is_found(), brute);
        assert!(find_cycle_type_orthomorphism(&g, &"3^2+1^1".parse().unwrap(), &b).is_ok());
        assert!(find_cycle_type_orthomorphism(&g, &"2^3".parse().unwrap(), &b).is_err());
        assert!(find_cycle_type_orthomorphism(&g, &"1+2".parse().unwrap(), &b).is_err());
    }

    #[test]
    fn any_orthomorphism_matches_brute_force_small() {
        for n in 1..=6u32 {
            let g = z(n);
            let brute = all_perms(n).into_iter().any(|p| verify_orthomorphism(&g, &els(&p)).is_ok());
            let s = search_any_orthomorphism(&g, &SearchBudget::default());
            assert_eq!(s.outcome.is_found(), brute, "Z{n}");
            assert_eq!(brute, g.hall_paige());
            if let Some(o) = s.found() {
                assert_eq!(o.verify(), Ok(()));
            }
        }
    }

    #[test]
    fn matchability_examples() {
        let b = SearchBudget::default();
        let hp = EquationSystem::hall_paige();
        let w = matchable(&hp, &z(5), &b).unwrap().found().unwrap();
        assert_eq!(verify_matchable_witness(&hp, &z(5), &w), Ok(()));
        assert!(matchable(&hp, &z(4), &b).unwrap().outcome.is_nonexistent());
        let q = EquationSystem::queens();
        let w = matchable(&q, &z(5), &b).unwrap().found().unwrap();
        assert_eq!(verify_matchable_witness(&q, &z(5), &w), Ok(()));
        assert!(matchable(&q, &z(9), &b).unwrap().outcome.is_nonexistent());
        assert!(matchable(&q, &z(3), &b).unwrap().outcome.is_nonexistent());
        let mut bad = w.clone();
        bad[2].swap(0, 1);
        assert!(verify_matchable_witness(&q, &z(5), &bad).is_err());
    }

    #[test]
    fn equation_parsing() {
        let a = EquationSystem::parse("1,1,-1,0; 1,-1,0,-1").unwrap();
        assert_eq!(a, EquationSystem::queens());
        assert_eq!(a.to_string(), "1,1,-1,0;1,-1,0,-1");
        for bad in ["", "1,,2", "1,2;3", "a", "99999999999999999"] {
            assert!(EquationSystem::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn plan_small() {
        let plan = sweep_plan(3).unwrap();
        assert_eq!(plan.len(), 2);
        assert!(matches!(&plan[0], SweepEntry::Skipped { .. }));
        assert_eq!(plan[1], SweepEntry::Cell { group: z(3), k: 2 });
        assert!(sweep_plan(1).is_err());
    }
}
