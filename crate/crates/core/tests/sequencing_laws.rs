use orthomorph::group::{Element, GroupSpec};
use orthomorph::sequencing::{
    is_cycle_candidate, is_path_candidate, order_as_cycle_candidate, order_as_path_candidate, walk_in, walk_out,
};
use orthomorph::enumerate_abelian_groups;
use proptest::prelude::*;
use std::collections::HashSet;

fn instance() -> impl Strategy<Value = (GroupSpec, u64, Vec<u64>)> {
    (2u32..=50).prop_flat_map(|n| {
        let g = GroupSpec::cyclic(n).unwrap();
        (Just(g), 0..n as u64, prop::collection::vec(1..n as u64, 2..=7))
    })
}

fn els(g: &GroupSpec, xs: &[u64]) -> Vec<Element> {
    xs.iter().map(|&x| g.element(x).unwrap()).collect()
}

fn distinct(v: &[Element]) -> bool {
    v.iter().collect::<HashSet<_>>().len() == v.len()
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn walks_are_paths_exactly_for_path_candidates((g, v, c) in instance()) {
        let c = els(&g, &c);
        let v = g.element(v).unwrap();
        prop_assert_eq!(distinct(&walk_out(&g, v, &c)), is_path_candidate(&g, &c));
        prop_assert_eq!(distinct(&walk_in(&g, v, &c)), is_path_candidate(&g, &c));
    }

    #[test]
    fn cycle_candidates_close_up((g, v, c) in instance()) {
        let c = els(&g, &c);
        let v = g.element(v).unwrap();
        if is_cycle_candidate(&g, &c).unwrap() {
            let w = walk_out(&g, v, &c);
            prop_assert_eq!(w[0], v);
            prop_assert_eq!(*w.last().unwrap(), v);
            prop_assert!(distinct(&w[..c.len()]));
        }
    }

    #[test]
    fn reversal_negation_symmetry((g, _v, c) in instance()) {
        let c = els(&g, &c);
        let rev: Vec<Element> = c.iter().rev().map(|&x| g.neg(x)).collect();
        prop_assert_eq!(is_cycle_candidate(&g, &c).unwrap(), is_cycle_candidate(&g, &rev).unwrap());
        prop_assert_eq!(is_path_candidate(&g, &c), is_path_candidate(&g, &rev));
    }
}

/// Every identity-free subset of size `2..=max` for each group up to `max_order`.
fn each_subset(max_order: u32, max_size: usize, mut visit: impl FnMut(&GroupSpec, &[Element])) {
    for n in 2..=max_order {
        for g in enumerate_abelian_groups(n) {
            let nz: Vec<Element> = g.nonzero_elements().collect();
            let cap = max_size.min(nz.len());
            for mask in 1u32..(1 << nz.len()) {
                let size = mask.count_ones() as usize;
                if !(2..=cap).contains(&size) {
                    continue;
                }
                let s: Vec<Element> = (0..nz.len()).filter(|i| mask >> i & 1 == 1).map(|i| nz[i]).collect();
                visit(&g, &s);
            }
        }
    }
}

#[test]
fn orderings_exist_for_small_groups() {
    each_subset(10, 9, |g, s| {
        if g.sum(s.iter().copied()).is_identity() {
            let c = order_as_cycle_candidate(g, s).unwrap().unwrap_or_else(|| panic!("{g} {s:?}"));
            assert!(is_cycle_candidate(g, &c).unwrap());
        } else {
            let c = order_as_path_candidate(g, s).unwrap().unwrap_or_else(|| panic!("{g} {s:?}"));
            assert!(is_path_candidate(g, &c));
        }
    });
}
