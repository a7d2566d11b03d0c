//! Counting good tuples and the greedy construction of the families `F_G`
//! (4-tuples with sum `f`, split into halves `F⁺ | F⁻`) and `S_G`
//! (`z_S`-tuples with sum `s`) used for long cycles, with an independent
//! property checker.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::patterns::ENUMERATION_CAP;
use crate::sequencing::{is_dissociable, is_near_dissociable, is_path_candidate, is_rainbow, separable_at_distance};

/// The family-size divisor: at most `⌊n / (64k)⌋` tuples per family.
pub const FAMILY_CONSTANT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodFamilies {
    #[serde(rename = "F")]
    pub f_tuples: Vec<[Element; 4]>,
    #[serde(rename = "S")]
    pub s_tuples: Vec<Vec<Element>>,
    pub f: Element,
    pub s: Element,
    #[serde(rename = "z_S")]
    pub z_s: usize,
    pub q: Element,
}

/// The unique `z ∈ {2..5}` with `k − 4 − z` positive and divisible by 4.
pub fn z_s_for(k: usize) -> Option<usize> {
    (2..=5).find(|&z| k > 4 + z && (k - 4 - z).is_multiple_of(4))
}

/// `q = −((k − 4 − z_S)/4)·f − s`.
pub fn q_for(group: &GroupSpec, k: usize, z_s: usize, f: Element, s: Element) -> Element {
    let t = ((k - 4 - z_s) / 4) as i64;
    group.sub(group.mul(-t, f), s)
}

/// Number of `k`-tuples with sum `s` that are rainbow path-candidates
/// avoiding `avoid`, by enumerating all `n^{k−1}` tuples with that sum.
pub fn count_good_tuples(group: &GroupSpec, k: usize, s: Element, avoid: &[Element]) -> Result<u64> {
    group.check(s)?;
    crate::sequencing::validate(group, avoid)?;
    if s.is_identity() {
        return Err(Error::precondition("the target sum must be nonzero"));
    }
    if k < 2 {
        return Err(Error::precondition("k must be at least 2"));
    }
    let size = (group.n() as u128).checked_pow(k as u32 - 1).unwrap_or(u128::MAX);
    if size > ENUMERATION_CAP {
        return Err(Error::Budget { size, cap: ENUMERATION_CAP });
    }
    let mut banned = vec![false; group.n()];
    avoid.iter().for_each(|e| banned[e.index()] = true);
    let n = group.order();
    let mut t = vec![Element::IDENTITY; k];
    let mut count = 0;
    loop {
        let head = group.sum(t[..k - 1].iter().copied());
        t[k - 1] = group.sub(s, head);
        if t.iter().all(|e| !banned[e.index()]) && is_rainbow(&t) && is_path_candidate(group, &t) {
            count += 1;
        }
        let mut i = k - 1;
        loop {
            if i == 0 {
                return Ok(count);
            }
            i -= 1;
            let next = t[i].index() as u32 + 1;
            if next < n {
                t[i] = Element::from_index_unchecked(next);
                break;
            }
            t[i] = Element::IDENTITY;
        }
    }
}

/// Where the greedy construction ran out of candidates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuildStage {
    /// No `s` keeps `q + m·f` and `f ∓ (q + m·f)` away from zero.
    ChooseS,
    /// `S_G` could not be extended past this many tuples.
    ExtendS(usize),
    /// `F_G` could not be extended past this many tuples.
    ExtendF(usize),
}

fn subset_sums(group: &GroupSpec, t: &[Element]) -> Vec<Element> {
    (1u32..1 << t.len())
        .map(|mask| group.sum((0..t.len()).filter(|i| mask >> i & 1 == 1).map(|i| t[i])))
        .collect()
}

struct Builder<'a> {
    g: &'a GroupSpec,
    k: usize,
    f: Element,
    q: Element,
    offset: u32,
    used: Vec<bool>,
    /// Distances `q + m·f` for `m ∈ 0..=k`, with their negatives.
    distances: HashSet<Element>,
    s_prefixes: HashSet<Element>,
    f_prefixes: HashSet<Element>,
    plus_prefixes: HashSet<Element>,
    minus_prefixes: HashSet<Element>,
    /// `±ΣT` over nonempty subsets `T` of tuples already in `F_G`.
    f_subset_sums: HashSet<Element>,
    f_subset_sums_pm: HashSet<Element>,
}

impl Builder<'_> {
    fn nth(&self, i: u32) -> Element {
        Element::from_index_unchecked((i + self.offset) % self.g.order())
    }

    /// Depth-first lexicographic search for an `S` tuple: rainbow
    /// path-candidate with sum `s`, unused entries, and proper-prefix sums
    /// fresh against the family.
    fn next_s(&self, z: usize, s: Element) -> Option<Vec<Element>> {
        fn go(b: &Builder<'_>, z: usize, s: Element, t: &mut Vec<Element>, sums: &mut Vec<Element>) -> bool {
            let acc = *sums.last().expect("starts with 0");
            if t.len() + 1 == z {
                let last = b.g.sub(s, acc);
                let ok = !b.used[last.index()] && !t.contains(&last) && !sums.contains(&s);
                if ok {
                    t.push(last);
                }
                return ok;
            }
            for i in 0..b.g.order() {
                let x = b.nth(i);
                let next = b.g.add(acc, x);
                if b.used[x.index()] || t.contains(&x) || sums.contains(&next) || b.s_prefixes.contains(&next) {
                    continue;
                }
                t.push(x);
                sums.push(next);
                if go(b, z, s, t, sums) {
                    return true;
                }
                t.pop();
                sums.pop();
            }
            false
        }
        let mut t = Vec::with_capacity(z);
        let mut sums = vec![Element::IDENTITY];
        go(self, z, s, &mut t, &mut sums).then_some(t)
    }

    fn add_s(&mut self, t: &[Element]) {
        let mut acc = Element::IDENTITY;
        for &x in &t[..t.len() - 1] {
            acc = self.g.add(acc, x);
            self.s_prefixes.insert(acc);
        }
        t.iter().for_each(|x| self.used[x.index()] = true);
    }

    fn separated(&self, x: Element) -> bool {
        !self.distances.contains(&x)
    }

    fn next_f(&self) -> Option<[Element; 4]> {
        let g = self.g;
        for i in 1..g.order() {
            let fp = self.nth(i);
            let fm = g.sub(self.f, fp);
            if fp.is_identity() || fm.is_identity() {
                continue;
            }
            if self.f_subset_sums.contains(&fp) || self.f_subset_sums.contains(&fm) {
                continue;
            }
            for j in 0..g.order() {
                let a = self.nth(j);
                let a2 = g.sub(fp, a);
                let plus = [a, a2];
                let ok = !a.is_identity()
                    && !a2.is_identity()
                    && a != a2
                    && !self.used[a.index()]
                    && !self.used[a2.index()]
                    && !self.plus_prefixes.contains(&a)
                    && !self.plus_prefixes.contains(&fp)
                    && self.separated(g.add(a, fm))
                    && self.separated(g.add(fp, fm))
                    && !self.f_subset_sums_pm.contains(&a)
                    && !self.f_subset_sums_pm.contains(&a2);
                if !ok {
                    continue;
                }
                if let Some(minus) = self.next_minus(plus, fm) {
                    return Some([a, a2, minus[0], minus[1]]);
                }
            }
        }
        None
    }

    fn next_minus(&self, plus: [Element; 2], fm: Element) -> Option<[Element; 2]> {
        let g = self.g;
        for j in 0..g.order() {
            let b = self.nth(j);
            let b2 = g.sub(fm, b);
            let tuple = [plus[0], plus[1], b, b2];
            let ok = !b.is_identity()
                && !b2.is_identity()
                && b != b2
                && !self.used[b.index()]
                && !self.used[b2.index()]
                && !plus.contains(&b)
                && !plus.contains(&b2)
                && !self.minus_prefixes.contains(&b)
                && !self.minus_prefixes.contains(&fm)
                && (0..=self.k as i64).all(|m| {
                    let d = g.add(self.q, g.mul(m, self.f));
                    separable_at_distance(g, &plus, &[b, b2], d)
                })
                && is_path_candidate(g, &tuple);
            if !ok {
                continue;
            }
            let mut acc = Element::IDENTITY;
            let fresh = tuple[..3].iter().all(|&x| {
                acc = g.add(acc, x);
                !self.f_prefixes.contains(&acc)
            });
            if fresh {
                return Some([b, b2]);
            }
        }
        None
    }

    fn add_f(&mut self, t: [Element; 4]) {
        let g = self.g;
        let mut acc = Element::IDENTITY;
        for &x in &t[..3] {
            acc = g.add(acc, x);
            self.f_prefixes.insert(acc);
        }
        self.plus_prefixes.insert(t[0]);
        self.plus_prefixes.insert(g.add(t[0], t[1]));
        self.minus_prefixes.insert(t[2]);
        self.minus_prefixes.insert(g.add(t[2], t[3]));
        for x in subset_sums(g, &t) {
            self.f_subset_sums.insert(x);
            self.f_subset_sums_pm.insert(x);
            self.f_subset_sums_pm.insert(g.neg(x));
        }
        t.iter().for_each(|x| self.used[x.index()] = true);
    }
}

/// Greedy construction of `target_count` tuples in each family.
///
/// `f` is the smallest nonzero element and `s` the smallest nonzero element
/// with `q + m·f ≠ 0` for `m ∈ 0..=k+1` and `f ≠ ±(q + m·f)` for `m ∈ 0..=k`.
/// Tuples are scanned lexicographically starting from element `seed mod n`.
pub fn build_good_families(
    group: &GroupSpec,
    k: usize,
    target_count: usize,
    seed: u64,
) -> Result<std::result::Result<GoodFamilies, BuildStage>> {
    if k < 10 {
        return Err(Error::precondition("k must be at least 10"));
    }
    let cap = group.n() / (k * FAMILY_CONSTANT);
    if target_count > cap {
        return Err(Error::precondition(format!("target_count {target_count} exceeds n/(64k) = {cap}")));
    }
    let z_s = z_s_for(k).expect("k >= 10 admits a z_S");
    let g = group;
    let f = Element::from_index_unchecked(1 % g.order());
    if f.is_identity() {
        return Ok(Err(BuildStage::ChooseS));
    }
    let s = g.nonzero_elements().find(|&s| {
        let q = q_for(g, k, z_s, f, s);
        (0..=k as i64 + 1).all(|m| !g.add(q, g.mul(m, f)).is_identity())
            && (0..=k as i64).all(|m| {
                let d = g.add(q, g.mul(m, f));
                f != d && f != g.neg(d)
            })
    });
    let Some(s) = s else {
        return Ok(Err(BuildStage::ChooseS));
    };
    let q = q_for(g, k, z_s, f, s);
    let distances = (0..=k as i64)
        .flat_map(|m| {
            let d = g.add(q, g.mul(m, f));
            [d, g.neg(d)]
        })
        .collect();
    let mut b = Builder {
        g,
        k,
        f,
        q,
        offset: (seed % g.order() as u64) as u32,
        used: vec![false; g.n()],
        distances,
        s_prefixes: HashSet::new(),
        f_prefixes: HashSet::new(),
        plus_prefixes: HashSet::new(),
        minus_prefixes: HashSet::new(),
        f_subset_sums: HashSet::new(),
        f_subset_sums_pm: HashSet::new(),
    };
    let mut s_tuples = Vec::with_capacity(target_count);
    while s_tuples.len() < target_count {
        let Some(t) = b.next_s(z_s, s) else {
            return Ok(Err(BuildStage::ExtendS(s_tuples.len())));
        };
        b.add_s(&t);
        s_tuples.push(t);
    }
    let mut f_tuples = Vec::with_capacity(target_count);
    while f_tuples.len() < target_count {
        let Some(t) = b.next_f() else {
            return Ok(Err(BuildStage::ExtendF(f_tuples.len())));
        };
        b.add_f(t);
        f_tuples.push(t);
    }
    Ok(Ok(GoodFamilies { f_tuples, s_tuples, f, s, z_s, q }))
}

/// Per-property verdicts; `properties[i]` is property `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub properties: [bool; 6],
    /// All tuples of both families pairwise disjoint as sets.
    pub disjoint: bool,
    pub failures: Vec<String>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|&p| p) && self.disjoint
    }
}

/// Checks the six family properties and disjointness from scratch.
pub fn check_good_families(fam: &GoodFamilies, group: &GroupSpec, k: usize) -> FamilyReport {
    let g = group;
    let mut failures = Vec::new();
    let mut fail = |p: &mut bool, msg: String| {
        *p = false;
        failures.push(msg);
    };
    let in_range = fam.f_tuples.iter().flatten().chain(fam.s_tuples.iter().flatten()).all(|&e| g.contains(e))
        && [fam.f, fam.s, fam.q].iter().all(|&e| g.contains(e));
    if !in_range {
        return FamilyReport {
            properties: [false; 6],
            disjoint: false,
            failures: vec!["an element lies outside the group".into()],
        };
    }
    let mut p = [true; 6];
    let mut disjoint = true;

    for (i, t) in fam.f_tuples.iter().enumerate() {
        if g.sum(t.iter().copied()) != fam.f {
            fail(&mut p[0], format!("F_{i} does not sum to f"));
        }
    }

    for (i, t) in fam.s_tuples.iter().enumerate() {
        if t.len() != fam.z_s || !(2..=5).contains(&t.len()) {
            fail(&mut p[1], format!("S_{i} has size {} instead of z_S = {}", t.len(), fam.z_s));
        }
        if g.sum(t.iter().copied()) != fam.s {
            fail(&mut p[1], format!("S_{i} does not sum to s"));
        }
        if !is_rainbow(t) || !is_path_candidate(g, t) {
            fail(&mut p[2], format!("S_{i} is not a rainbow path-candidate"));
        }
    }
    if !is_near_dissociable(g, &fam.s_tuples).unwrap_or(false) {
        fail(&mut p[2], "S_G is not near-dissociable".into());
    }

    if k < 4 + fam.z_s || !(k - 4 - fam.z_s).is_multiple_of(4) {
        fail(&mut p[3], "k − 4 − z_S is not a nonnegative multiple of 4".into());
    } else {
        if q_for(g, k, fam.z_s, fam.f, fam.s) != fam.q {
            fail(&mut p[3], "q does not equal −((k − 4 − z_S)/4)·f − s".into());
        }
        if fam.q.is_identity() {
            fail(&mut p[3], "q is the identity".into());
        }
    }

    let plus: Vec<Vec<Element>> = fam.f_tuples.iter().map(|t| t[..2].to_vec()).collect();
    let minus: Vec<Vec<Element>> = fam.f_tuples.iter().map(|t| t[2..].to_vec()).collect();
    for (i, t) in fam.f_tuples.iter().enumerate() {
        for (half, name) in [(&plus[i], "+"), (&minus[i], "-")] {
            if !is_rainbow(half) || !is_path_candidate(g, half) {
                fail(&mut p[4], format!("F_{i}^{name} is not a rainbow path-candidate"));
            }
        }
        if !is_rainbow(t) || !is_path_candidate(g, t) {
            fail(&mut p[4], format!("F_{i} is not a rainbow path-candidate"));
        }
    }
    if !is_dissociable(g, &plus).unwrap_or(false) {
        fail(&mut p[4], "the F^+ halves are not dissociable".into());
    }
    if !is_dissociable(g, &minus).unwrap_or(false) {
        fail(&mut p[4], "the F^- halves are not dissociable".into());
    }
    let whole: Vec<Vec<Element>> = fam.f_tuples.iter().map(|t| t.to_vec()).collect();
    if !is_near_dissociable(g, &whole).unwrap_or(false) {
        fail(&mut p[4], "F_G is not near-dissociable".into());
    }

    for i in 0..fam.f_tuples.len() {
        for m in 0..=k as i64 {
            let d = g.add(fam.q, g.mul(m, fam.f));
            if !separable_at_distance(g, &plus[i], &minus[i], d) {
                fail(&mut p[5], format!("F_{i}^+ and F_{i}^- are not separable at distance q + {m}f"));
            }
        }
    }

    let mut seen = HashSet::new();
    let all = whole.iter().chain(fam.s_tuples.iter());
    for (i, t) in all.enumerate() {
        let set: HashSet<Element> = t.iter().copied().collect();
        if set.iter().any(|e| seen.contains(e)) {
            fail(&mut disjoint, format!("tuple {i} shares an element with an earlier tuple"));
        }
        seen.extend(set);
    }

    FamilyReport { properties: p, disjoint, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    fn el(x: u32) -> Element {
        Element::from_index_unchecked(x)
    }

    #[test]
    fn z_s_arithmetic() {
        assert_eq!(z_s_for(10), Some(2));
        assert_eq!(z_s_for(11), Some(3));
        assert_eq!(z_s_for(12), Some(4));
        assert_eq!(z_s_for(13), Some(5));
        assert_eq!(z_s_for(14), Some(2));
        assert_eq!(z_s_for(7), None);
    }

    #[test]
    fn small_tuple_counts() {
        // (2,4) and (4,2) are the only good pairs summing to 1 in Z_5.
        assert_eq!(count_good_tuples(&z(5), 2, el(1), &[]).unwrap(), 2);
        assert_eq!(count_good_tuples(&z(5), 2, el(1), &[el(4)]).unwrap(), 0);
        assert!(count_good_tuples(&z(5), 2, el(0), &[]).is_err());
        let c = count_good_tuples(&z(7), 3, el(1), &[]).unwrap();
        assert!(c <= 49);
    }

    #[test]
    fn build_and_check_small_prime() {
        let g = z(1009);
        let fam = build_good_families(&g, 10, 1, 0).unwrap().unwrap();
        assert_eq!(fam.z_s, 2);
        let report = check_good_families(&fam, &g, 10);
        assert!(report.passed(), "{:?}", report.failures);
    }

    #[test]
    fn checker_catches_faults() {
        let g = z(1009);
        let fam = build_good_families(&g, 10, 1, 0).unwrap().unwrap();

        let mut shared = fam.clone();
        shared.f_tuples.push(fam.f_tuples[0]);
        let r = check_good_families(&shared, &g, 10);
        assert!(!r.disjoint && !r.passed());

        let mut zero_q = fam.clone();
        zero_q.q = Element::IDENTITY;
        let r = check_good_families(&zero_q, &g, 10);
        assert!(!r.properties[3]);
    }

    #[test]
    fn build_preconditions() {
        assert!(build_good_families(&z(1009), 9, 1, 0).is_err());
        assert!(build_good_families(&z(1009), 10, 2, 0).is_err());
        let fam = build_good_families(&z(503), 10, 0, 0).unwrap().unwrap();
        assert!(fam.f_tuples.is_empty() && check_good_families(&fam, &z(503), 10).passed());
    }
}
