//! Finite abelian groups given as products of cyclic factors.
//!
//! Elements are addressed by a canonical mixed-radix index. With factors
//! `n_0 ≥ n_1 ≥ … ≥ n_{r-1}` and coordinates `(c_0, …, c_{r-1})` the index is
//! `((c_0·n_1 + c_1)·n_2 + c_2)…`, so the last coordinate is least significant
//! and the identity has index 0.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Upper bound on the order of a parsed group.
pub const MAX_ORDER: u64 = 1 << 24;

/// A group element, identified by its canonical index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(u32);

impl Element {
    pub const IDENTITY: Element = Element(0);

    /// Wraps a raw index without a range check.
    pub const fn from_index_unchecked(index: u32) -> Self {
        Element(index)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn raw(self) -> u32 {
        self.0
    }

    pub const fn is_identity(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    /// Cyclic factor orders, each at least 2, sorted descending.
    factors: Vec<u32>,
    order: u32,
    strides: Vec<u32>,
}

impl GroupSpec {
    /// Builds a group from cyclic factor orders. Factors equal to 1 are dropped
    /// and the multiset is canonicalized by sorting descending.
    pub fn new(factors: &[u32]) -> Result<Self> {
        let mut fs: Vec<u32> = Vec::with_capacity(factors.len());
        let mut order: u64 = 1;
        for &f in factors {
            if f == 0 {
                return Err(Error::domain("cyclic factor of order 0"));
            }
            if f == 1 {
                continue;
            }
            order = order.saturating_mul(f as u64);
            if order > MAX_ORDER {
                return Err(Error::domain(format!("group order exceeds {MAX_ORDER}")));
            }
            fs.push(f);
        }
        fs.sort_unstable_by(|a, b| b.cmp(a));
        let mut strides = vec![1u32; fs.len()];
        for i in (0..fs.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * fs[i + 1];
        }
        Ok(GroupSpec { factors: fs, order: order as u32, strides })
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        GroupSpec::new(&[n])
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn n(&self) -> usize {
        self.order as usize
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn identity(&self) -> Element {
        Element::IDENTITY
    }

    pub fn element(&self, index: u64) -> Result<Element> {
        if index < self.order as u64 {
            Ok(Element(index as u32))
        } else {
            Err(Error::ElementOutOfRange { index, order: self.order })
        }
    }

    pub fn check(&self, e: Element) -> Result<Element> {
        self.element(e.0 as u64)
    }

    pub fn contains(&self, e: Element) -> bool {
        e.0 < self.order
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(Element)
    }

    /// Every element except the identity.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = Element> + '_ {
        (1..self.order).map(Element)
    }

    pub fn coords(&self, e: Element) -> Vec<u32> {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(&n, &s)| (e.0 / s) % n)
            .collect()
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<Element> {
        if coords.len() != self.factors.len() {
            return Err(Error::domain(format!(
                "expected {} coordinates, got {}",
                self.factors.len(),
                coords.len()
            )));
        }
        let mut index = 0u32;
        for ((&c, &n), &s) in coords.iter().zip(&self.factors).zip(&self.strides) {
            if c >= n {
                return Err(Error::domain(format!("coordinate {c} out of range for Z{n}")));
            }
            index += c * s;
        }
        Ok(Element(index))
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        debug_assert!(self.contains(a) && self.contains(b));
        if self.factors.len() <= 1 {
            let s = a.0 + b.0;
            return Element(if s >= self.order { s - self.order } else { s });
        }
        let mut out = 0u32;
        for (&n, &s) in self.factors.iter().zip(&self.strides) {
            let d = (a.0 / s) % n + (b.0 / s) % n;
            out += if d >= n { d - n } else { d } * s;
        }
        Element(out)
    }

    #[inline]
    pub fn neg(&self, a: Element) -> Element {
        debug_assert!(self.contains(a));
        if self.factors.len() <= 1 {
            return Element(if a.0 == 0 { 0 } else { self.order - a.0 });
        }
        let mut out = 0u32;
        for (&n, &s) in self.factors.iter().zip(&self.strides) {
            let d = (a.0 / s) % n;
            out += if d == 0 { 0 } else { n - d } * s;
        }
        Element(out)
    }

    #[inline]
    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    /// `t·a` for any integer `t`, including negative multipliers.
    pub fn mul(&self, t: i64, a: Element) -> Element {
        debug_assert!(self.contains(a));
        let mut out = 0u32;
        for (&n, &s) in self.factors.iter().zip(&self.strides) {
            let d = ((a.0 / s) % n) as i64;
            let t_mod = t.rem_euclid(n as i64);
            out += ((t_mod * d) % n as i64) as u32 * s;
        }
        Element(out)
    }

    pub fn try_add(&self, a: Element, b: Element) -> Result<Element> {
        Ok(self.add(self.check(a)?, self.check(b)?))
    }

    pub fn try_neg(&self, a: Element) -> Result<Element> {
        Ok(self.neg(self.check(a)?))
    }

    pub fn try_mul(&self, t: i64, a: Element) -> Result<Element> {
        Ok(self.mul(t, self.check(a)?))
    }

    pub fn sum<I: IntoIterator<Item = Element>>(&self, items: I) -> Element {
        items.into_iter().fold(Element::IDENTITY, |acc, e| self.add(acc, e))
    }

    pub fn try_sum<'a, I: IntoIterator<Item = &'a Element>>(&self, items: I) -> Result<Element> {
        let mut acc = Element::IDENTITY;
        for &e in items {
            acc = self.add(acc, self.check(e)?);
        }
        Ok(acc)
    }

    /// True iff the elements of the group sum to the identity.
    pub fn hall_paige(&self) -> bool {
        self.sum(self.elements()).is_identity()
    }

    /// `|{t·x : x ∈ G}|`, as the product over factors of `n_i / gcd(t, n_i)`.
    pub fn mult_image_size(&self, t: u64) -> u64 {
        self.factors
            .iter()
            .map(|&n| n as u64 / gcd(t, n as u64))
            .product()
    }

    /// `max(|2G|, |3G|)^5 ≥ n`, compared in exact integers.
    pub fn two_three_lemma_holds(&self) -> bool {
        let best = self.mult_image_size(2).max(self.mult_image_size(3)) as u128;
        best.pow(5) >= self.order as u128
    }

    /// The identity together with every `g` for which `2x = g` has more than
    /// `√n` solutions (tested as `count² > n`).
    pub fn non_generic_elements(&self) -> Vec<Element> {
        let mut counts = vec![0u64; self.n()];
        for x in self.elements() {
            counts[self.add(x, x).index()] += 1;
        }
        let n = self.order as u64;
        self.elements()
            .filter(|g| g.is_identity() || counts[g.index()] * counts[g.index()] > n)
            .collect()
    }

    pub fn is_generic(&self, g: Element) -> bool {
        if g.is_identity() {
            return false;
        }
        let c = self.elements().filter(|&x| self.add(x, x) == g).count() as u64;
        c * c <= self.order as u64
    }

    /// Parses `Z7`, `Z4xZ2`, `Z2^3`, `z3 x z3`; factors of order 1 vanish.
    pub fn parse(input: &str) -> Result<Self> {
        let syntax = |reason: &str| Error::GroupSyntax {
            input: input.chars().take(64).collect(),
            reason: reason.to_string(),
        };
        let text: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let text = text.to_ascii_lowercase();
        if text.is_empty() {
            return Err(syntax("empty"));
        }
        let mut factors = Vec::new();
        let mut total: u64 = 1;
        for part in text.split(['x', '×', '*']) {
            let body = part.strip_prefix('z').ok_or_else(|| syntax("factor must start with Z"))?;
            let (base, power) = match body.split_once('^') {
                Some((b, p)) => (b, parse_small(p).ok_or_else(|| syntax("bad exponent"))?),
                None => (body, 1),
            };
            let base = parse_small(base).ok_or_else(|| syntax("bad factor order"))?;
            if base == 0 {
                return Err(syntax("factor order must be positive"));
            }
            for _ in 0..power {
                if base == 1 {
                    break;
                }
                total = total.saturating_mul(base);
                if total > MAX_ORDER {
                    return Err(syntax("group order too large"));
                }
                factors.push(base as u32);
            }
        }
        GroupSpec::new(&factors)
    }
}

fn parse_small(s: &str) -> Option<u64> {
    if s.is_empty() || s.len() > 9 || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.factors.len() {
            let n = self.factors[i];
            let run = self.factors[i..].iter().take_while(|&&m| m == n).count();
            if !first {
                write!(f, "x")?;
            }
            first = false;
            if run > 1 {
                write!(f, "Z{n}^{run}")?;
            } else {
                write!(f, "Z{n}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupSpec::parse(s)
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        GroupSpec::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// One group per isomorphism class of abelian groups of the given order,
/// written as products of prime-power cyclic factors. Primes ascend, and for
/// each prime the exponent partitions run from the cyclic one downwards.
pub fn enumerate_abelian_groups(order: u32) -> Vec<GroupSpec> {
    if order == 0 {
        return Vec::new();
    }
    let prime_parts: Vec<Vec<Vec<u32>>> = factorize(order)
        .into_iter()
        .map(|(p, e)| {
            partitions(e)
                .into_iter()
                .map(|part| part.into_iter().map(|k| p.pow(k)).collect())
                .collect()
        })
        .collect();
    let mut out = vec![Vec::<u32>::new()];
    for options in prime_parts {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for opt in &options {
                let mut f = prefix.clone();
                f.extend_from_slice(opt);
                next.push(f);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|f| GroupSpec::new(&f).expect("order fits"))
        .collect()
}

fn factorize(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Integer partitions of `n` with parts in non-increasing order, listed in
/// reverse lexicographic order (`[n]` first, `[1, …, 1]` last).
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn el(g: &GroupSpec, c: &[u32]) -> Element {
        g.from_coords(c).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let z5 = g("Z5");
        assert_eq!(z5.add(Element(3), Element(4)), Element(2));
        let z42 = g("Z4xZ2");
        assert_eq!(z42.coords(z42.neg(el(&z42, &[1, 1]))), vec![3, 1]);
        let z6 = g("Z6");
        assert_eq!(z6.mul(3, Element(4)), Element(0));
        assert_eq!(z6.mul(-1, Element(4)), Element(2));
    }

    #[test]
    fn element_sums() {
        assert_eq!(g("Z3").sum(g("Z3").elements()), Element(0));
        assert_eq!(g("Z4").sum(g("Z4").elements()), Element(2));
        let v4 = g("Z2^2");
        assert_eq!(v4.sum(v4.elements()), Element(0));
        assert_eq!(v4.sum(std::iter::empty()), Element(0));
    }

    #[test]
    fn hall_paige_examples() {
        assert!(g("Z3").hall_paige());
        assert!(!g("Z4").hall_paige());
        assert!(g("Z2xZ2").hall_paige());
        assert!(g("Z4xZ2").hall_paige());
        assert!(!g("Z12").hall_paige());
    }

    #[test]
    fn mult_image_examples() {
        assert_eq!(g("Z5").mult_image_size(2), 5);
        assert_eq!(g("Z2^3").mult_image_size(2), 1);
        assert_eq!(g("Z6").mult_image_size(3), 2);
        assert!(g("Z5").two_three_lemma_holds());
        assert!(g("Z2^3").two_three_lemma_holds());
        assert!(g("Z6").two_three_lemma_holds());
    }

    #[test]
    fn non_generic_examples() {
        assert_eq!(g("Z5").non_generic_elements(), vec![Element(0)]);
        assert_eq!(g("Z2xZ2").non_generic_elements(), vec![Element(0)]);
        assert_eq!(g("Z8").non_generic_elements(), vec![Element(0)]);
        // Z2^4: 2x = 0 has 16 solutions, 16² > 16.
        assert_eq!(g("Z2^4").non_generic_elements(), vec![Element(0)]);
        assert!(!g("Z8").is_generic(Element(0)));
        assert!(g("Z8").is_generic(Element(2)));
    }

    #[test]
    fn enumerate_examples() {
        let names = |n| enumerate_abelian_groups(n).iter().map(|g| g.to_string()).collect::<Vec<_>>();
        assert_eq!(names(4), ["Z4", "Z2^2"]);
        assert_eq!(names(7), ["Z7"]);
        assert_eq!(names(8), ["Z8", "Z4xZ2", "Z2^3"]);
        assert_eq!(names(12), ["Z4xZ3", "Z3xZ2^2"]);
        assert_eq!(names(1), ["Z1"]);
        assert_eq!(enumerate_abelian_groups(16).len(), 5);
        assert_eq!(enumerate_abelian_groups(72).len(), 6);
    }

    #[test]
    fn parsing_and_rendering() {
        assert_eq!(g("z2^3").to_string(), "Z2^3");
        assert_eq!(g("Z2xZ4").to_string(), "Z4xZ2");
        assert_eq!(g(" Z3 x Z2 x Z2 ").to_string(), "Z3xZ2^2");
        assert_eq!(g("Z2xZ4"), g("Z4xZ2"));
        assert_eq!(g("Z1").order(), 1);
        assert_eq!(g("Z6xZ1").to_string(), "Z6");
        for bad in ["", "Z", "Q7", "Z0", "Z7x", "Z2^", "Z-3", "Z2^99", "Z99999999999"] {
            assert!(GroupSpec::parse(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn out_of_range_elements_are_domain_errors() {
        let z5 = g("Z5");
        assert!(z5.try_add(Element(3), Element(7)).is_err());
        assert!(z5.element(5).is_err());
        assert_eq!(z5.try_add(Element(3), Element(4)).unwrap(), Element(2));
    }

    #[test]
    fn coords_roundtrip() {
        let grp = g("Z4xZ3xZ2");
        for e in grp.elements() {
            assert_eq!(grp.from_coords(&grp.coords(e)).unwrap(), e);
        }
        assert_eq!(grp.coords(Element(0)), vec![0, 0, 0]);
    }
}
