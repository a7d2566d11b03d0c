//! Exact solvers for fixed-sum partitions: zero-sum equipartitions, m-subsets
//! with a given sum, 4-blocks with sum α, partitions of `G \ {0}` into
//! zero-sum blocks of prescribed sizes, and partitions into ordered
//! cycle/path-candidates.
//!
//! Every search explores blocks in canonical index order and returns the
//! first partition found. A miss is `Nonexistent` only when the whole tree
//! was covered inside the node budget.

use crate::bitset::BitSet;
use crate::budget::{Meter, Search, SearchBudget};
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::sequencing::{order_as_cycle_candidate, order_as_path_candidate, validate};

/// Disjoint blocks of elements of one group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub group: GroupSpec,
    pub blocks: Vec<Vec<Element>>,
}

impl Partition {
    pub fn block_sums(&self) -> Vec<Element> {
        self.blocks.iter().map(|b| self.group.sum(b.iter().copied())).collect()
    }

    /// Re-checks the partition from scratch: blocks pairwise disjoint, their
    /// union equal to `universe`, and every block summing to `target`.
    pub fn verify(&self, universe: &[Element], target: Element) -> std::result::Result<(), String> {
        let n = self.group.n();
        let mut seen = vec![false; n];
        for (i, block) in self.blocks.iter().enumerate() {
            for &e in block {
                if !self.group.contains(e) {
                    return Err(format!("block {i} holds out-of-range element {e}"));
                }
                if std::mem::replace(&mut seen[e.index()], true) {
                    return Err(format!("element {e} appears twice"));
                }
            }
            let s = self.group.sum(block.iter().copied());
            if s != target {
                return Err(format!("block {i} sums to {s}, expected {target}"));
            }
        }
        let mut want = vec![false; n];
        for &e in universe {
            if self.group.contains(e) {
                want[e.index()] = true;
            }
        }
        if want != seen {
            return Err("blocks do not cover the target set exactly".into());
        }
        Ok(())
    }
}

/// How the blocks of [`generalized_tannenbaum_candidates`] are ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateMode {
    /// Zero-sum blocks ordered as rainbow cycle-candidates.
    Cycle,
    /// 4-blocks with sum `alpha`, ordered as rainbow path-candidates.
    Path { alpha: Element },
}

struct BlockSearch<'a, F> {
    group: &'a GroupSpec,
    order: Vec<Element>,
    remaining: BitSet,
    target: Element,
    sizes: Vec<(usize, usize)>,
    accept: F,
    blocks: Vec<Vec<Element>>,
    meter: Meter,
}

impl<F: FnMut(&[Element]) -> bool> BlockSearch<'_, F> {
    fn run(&mut self) -> bool {
        if !self.meter.tick() {
            return false;
        }
        let Some(first) = self.order.iter().copied().find(|e| self.remaining.contains(e.index())) else {
            return true;
        };
        self.remaining.remove(first.index());
        for s in 0..self.sizes.len() {
            let (size, count) = self.sizes[s];
            if count == 0 {
                continue;
            }
            self.sizes[s].1 -= 1;
            let mut block = vec![first];
            let start = self.order.iter().position(|&e| e == first).expect("present") + 1;
            if self.extend(&mut block, size, start, first) {
                return true;
            }
            self.sizes[s].1 += 1;
            if self.meter.exhausted() {
                break;
            }
        }
        self.remaining.insert(first.index());
        false
    }

    /// Grows `block` to `size` with increasing-index elements from `order[start..]`;
    /// the last element is forced by the target sum.
    fn extend(&mut self, block: &mut Vec<Element>, size: usize, start: usize, sum: Element) -> bool {
        if block.len() == size {
            if sum != self.target || !(self.accept)(block) {
                return false;
            }
            self.blocks.push(block.clone());
            if self.run() {
                return true;
            }
            self.blocks.pop();
            return false;
        }
        if block.len() + 1 == size {
            let need = self.group.sub(self.target, sum);
            let last = *block.last().expect("nonempty");
            // `order` is sorted, so every remaining element above `last` lies in `order[start..]`.
            if need > last && self.remaining.contains(need.index()) {
                self.remaining.remove(need.index());
                block.push(need);
                let ok = self.extend(block, size, start, self.target);
                block.pop();
                self.remaining.insert(need.index());
                return ok;
            }
            return false;
        }
        for i in start..self.order.len() {
            let e = self.order[i];
            if !self.remaining.contains(e.index()) {
                continue;
            }
            if !self.meter.tick() {
                return false;
            }
            self.remaining.remove(e.index());
            block.push(e);
            let ok = self.extend(block, size, i + 1, self.group.add(sum, e));
            block.pop();
            self.remaining.insert(e.index());
            if ok {
                return true;
            }
            if self.meter.exhausted() {
                return false;
            }
        }
        false
    }
}

fn partition_blocks(
    group: &GroupSpec,
    set: &[Element],
    sizes: &[usize],
    target: Element,
    budget: &SearchBudget,
    accept: impl FnMut(&[Element]) -> bool,
) -> Search<Partition> {
    let mut order = set.to_vec();
    order.sort_unstable();
    order.dedup();
    let mut remaining = BitSet::new(group.n());
    for e in &order {
        remaining.insert(e.index());
    }
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    let mut grouped: Vec<(usize, usize)> = Vec::new();
    for s in sorted {
        match grouped.last_mut() {
            Some((size, count)) if *size == s => *count += 1,
            _ => grouped.push((s, 1)),
        }
    }
    let mut search = BlockSearch {
        group,
        order,
        remaining,
        target,
        sizes: grouped,
        accept,
        blocks: Vec::new(),
        meter: budget.meter(),
    };
    let found = search.run();
    let blocks = std::mem::take(&mut search.blocks);
    search
        .meter
        .finish(found.then(|| Partition { group: group.clone(), blocks }))
}

fn identity_free_set(group: &GroupSpec, set: &[Element]) -> Result<Vec<Element>> {
    validate(group, set)?;
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.first().is_some_and(|e| e.is_identity()) {
        return Err(Error::IdentityPresent);
    }
    Ok(s)
}

fn require_sum(group: &GroupSpec, set: &[Element], required: Element) -> Result<()> {
    let actual = group.sum(set.iter().copied());
    if actual != required {
        return Err(Error::SumMismatch { actual: actual.raw(), required: required.raw() });
    }
    Ok(())
}

/// Partitions an identity-free zero-sum set into zero-sum blocks of size `k`.
pub fn zero_sum_equipartition(
    group: &GroupSpec,
    set: &[Element],
    k: usize,
    budget: &SearchBudget,
) -> Result<Search<Partition>> {
    let s = identity_free_set(group, set)?;
    if k < 2 {
        return Err(Error::precondition("block size must be at least 2"));
    }
    if s.len() % k != 0 {
        return Err(Error::Divisibility(format!("{k} does not divide |X| = {}", s.len())));
    }
    require_sum(group, &s, Element::IDENTITY)?;
    let sizes = vec![k; s.len() / k];
    Ok(partition_blocks(group, &s, &sizes, Element::IDENTITY, budget, |_| true))
}

/// Some `m`-subset of `pool` summing to `target`.
pub fn subset_with_sum(
    group: &GroupSpec,
    pool: &[Element],
    m: usize,
    target: Element,
    budget: &SearchBudget,
) -> Result<Search<Vec<Element>>> {
    validate(group, pool)?;
    group.check(target)?;
    let mut z = pool.to_vec();
    z.sort_unstable();
    z.dedup();
    if m > z.len() {
        return Err(Error::precondition(format!("m = {m} exceeds |Z| = {}", z.len())));
    }
    let mut meter = budget.meter();
    let mut chosen = Vec::with_capacity(m);
    let found = if m == 0 {
        meter.tick();
        target.is_identity()
    } else {
        let mut member = BitSet::new(group.n());
        z.iter().for_each(|e| member.insert(e.index()));
        choose_with_sum(group, &z, &member, m, 0, Element::IDENTITY, target, &mut chosen, &mut meter)
    };
    Ok(meter.finish(found.then_some(chosen)))
}

#[allow(clippy::too_many_arguments)]
fn choose_with_sum(
    group: &GroupSpec,
    z: &[Element],
    member: &BitSet,
    m: usize,
    start: usize,
    sum: Element,
    target: Element,
    chosen: &mut Vec<Element>,
    meter: &mut Meter,
) -> bool {
    if !meter.tick() {
        return false;
    }
    if chosen.len() + 1 == m {
        let need = group.sub(target, sum);
        let ok = member.contains(need.index())
            && chosen.last().is_none_or(|&l| need > l)
            && z[start..].binary_search(&need).is_ok();
        if ok {
            chosen.push(need);
        }
        return ok;
    }
    for i in start..z.len() {
        if z.len() - i < m - chosen.len() {
            break;
        }
        chosen.push(z[i]);
        if choose_with_sum(group, z, member, m, i + 1, group.add(sum, z[i]), target, chosen, meter) {
            return true;
        }
        chosen.pop();
        if meter.exhausted() {
            return false;
        }
    }
    false
}

/// Partitions an identity-free set into 4-blocks each summing to `alpha`.
pub fn partition_fixed_sum_quads(
    group: &GroupSpec,
    set: &[Element],
    alpha: Element,
    budget: &SearchBudget,
) -> Result<Search<Partition>> {
    let s = identity_free_set(group, set)?;
    group.check(alpha)?;
    if s.len() % 4 != 0 {
        return Err(Error::Divisibility(format!("4 does not divide |X| = {}", s.len())));
    }
    require_sum(group, &s, group.mul((s.len() / 4) as i64, alpha))?;
    let sizes = vec![4; s.len() / 4];
    Ok(partition_blocks(group, &s, &sizes, alpha, budget, |_| true))
}

/// Partitions an identity-free `set` into zero-sum blocks with the given
/// sizes. A set with nonzero total is refuted without search.
pub fn zero_sum_partition(
    group: &GroupSpec,
    set: &[Element],
    sizes: &[usize],
    budget: &SearchBudget,
) -> Result<Search<Partition>> {
    let s = identity_free_set(group, set)?;
    if sizes.iter().any(|&b| b < 2) {
        return Err(Error::precondition("every block size must be at least 2"));
    }
    let total: usize = sizes.iter().sum();
    if total != s.len() {
        return Err(Error::Divisibility(format!("block sizes sum to {total}, but |X| = {}", s.len())));
    }
    if !group.sum(s.iter().copied()).is_identity() {
        // Blocks summing to zero force the whole set to sum to zero.
        return Ok(Search { outcome: crate::budget::Outcome::Nonexistent, nodes: 0 });
    }
    Ok(partition_blocks(group, &s, sizes, Element::IDENTITY, budget, |_| true))
}

/// Partitions `G \ {0}` into zero-sum blocks with the given sizes.
pub fn tannenbaum_partition(group: &GroupSpec, sizes: &[usize], budget: &SearchBudget) -> Result<Search<Partition>> {
    let set: Vec<Element> = group.nonzero_elements().collect();
    zero_sum_partition(group, &set, sizes, budget)
}

/// Partitions `set` into `k`-tuples that are rainbow cycle-candidates (or, in
/// path mode, rainbow path-candidates with sum α). A block is accepted only if
/// it can be ordered, so a miss covers every partition.
pub fn generalized_tannenbaum_candidates(
    group: &GroupSpec,
    set: &[Element],
    k: usize,
    mode: CandidateMode,
    budget: &SearchBudget,
) -> Result<Search<Vec<Vec<Element>>>> {
    let s = identity_free_set(group, set)?;
    if k == 0 || s.len() % k != 0 {
        return Err(Error::Divisibility(format!("{k} does not divide |X| = {}", s.len())));
    }
    let blocks = s.len() / k;
    let target = match mode {
        CandidateMode::Cycle => {
            if !(3..=9).contains(&k) {
                return Err(Error::precondition("cycle mode needs 3 <= k <= 9"));
            }
            require_sum(group, &s, Element::IDENTITY)?;
            Element::IDENTITY
        }
        CandidateMode::Path { alpha } => {
            group.check(alpha)?;
            if k != 4 {
                return Err(Error::precondition("path mode needs k = 4"));
            }
            if alpha.is_identity() {
                return Err(Error::precondition("path mode needs a nonzero alpha"));
            }
            require_sum(group, &s, group.mul(blocks as i64, alpha))?;
            alpha
        }
    };
    let order = |block: &[Element]| match mode {
        CandidateMode::Cycle => order_as_cycle_candidate(group, block).ok().flatten(),
        CandidateMode::Path { .. } => order_as_path_candidate(group, block).ok().flatten(),
    };
    let search = partition_blocks(group, &s, &vec![k; blocks], target, budget, |b| order(b).is_some());
    Ok(search.map(|p| {
        p.blocks
            .iter()
            .map(|b| order(b).expect("accepted blocks are orderable"))
            .collect()
    }))
}
