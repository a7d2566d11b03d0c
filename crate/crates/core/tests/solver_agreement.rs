use orthomorph::group::{Element, GroupSpec};
use orthomorph::rainbow::{perfect_matching_materialized, perfect_matching_search, ColoredDigraphView};
use orthomorph::solver::{
    cycle_type, find_cycle_type_orthomorphism, find_fgt_orthomorphism, matchable, search_any_orthomorphism,
    search_fgt_by_permutation, verify_matchable_witness, verify_orthomorphism, CycleType, EquationSystem,
};
use orthomorph::zerosum::zero_sum_equipartition;
use orthomorph::{enumerate_abelian_groups, Outcome, SearchBudget};

fn groups_up_to(n: u32) -> Vec<GroupSpec> {
    (1..=n).flat_map(enumerate_abelian_groups).collect()
}

/// Heap's algorithm over `0..n`.
fn for_each_perm(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    visit(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            p.swap(if i % 2 == 0 { 0 } else { c[i] }, i);
            visit(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn orthomorphisms_exist_iff_hall_paige() {
    let b = SearchBudget::default();
    for g in groups_up_to(12) {
        let s = search_any_orthomorphism(&g, &b);
        assert!(!matches!(s.outcome, Outcome::Unknown), "{g}");
        assert_eq!(s.outcome.is_found(), g.hall_paige(), "{g}");
        if let Some(o) = s.found() {
            assert_eq!(o.verify(), Ok(()));
        }
        let m = matchable(&EquationSystem::hall_paige(), &g, &b).unwrap();
        assert_eq!(m.outcome.is_found(), g.hall_paige(), "{g}");
        if let Some(w) = m.found() {
            assert_eq!(verify_matchable_witness(&EquationSystem::hall_paige(), &g, &w), Ok(()));
        }
    }
}

#[test]
fn permutation_brute_force_up_to_8() {
    for g in groups_up_to(8) {
        let mut any = false;
        for_each_perm(g.n(), |p| {
            let perm: Vec<Element> = p.iter().map(|&i| g.element(i as u64).unwrap()).collect();
            any |= verify_orthomorphism(&g, &perm).is_ok();
        });
        assert_eq!(any, g.hall_paige(), "{g}");
    }
}

#[test]
fn fgt_routes_agree_up_to_13() {
    let b = SearchBudget::default();
    for g in groups_up_to(13) {
        let n = g.n();
        for k in [2usize, 3].into_iter().filter(|k| n > 1 && (n - 1) % k == 0) {
            let view = ColoredDigraphView::nonzero(&g);
            let fgt = find_fgt_orthomorphism(&g, k, &b).unwrap();
            let perm = search_fgt_by_permutation(&g, k, &b).unwrap();
            let factor = perfect_matching_search(&view, k, &b).unwrap();
            let exact = perfect_matching_materialized(&view, k, &b, 2_000_000).unwrap();
            let verdicts = [fgt.outcome.is_found(), perm.outcome.is_found(), factor.outcome.is_found(), exact.outcome.is_found()];
            assert!(verdicts.iter().all(|&v| v == verdicts[0]), "{g} k={k}: {verdicts:?}");
            assert_eq!(verdicts[0], g.hall_paige(), "{g} k={k}");
            for o in [fgt.found(), perm.found()].into_iter().flatten() {
                assert_eq!(o.verify(), Ok(()));
                assert_eq!(o.cycle_type(), CycleType::fgt(n, k).unwrap());
            }
        }
    }
}

#[test]
fn zero_sum_refuter_implies_nonexistence() {
    let b = SearchBudget::default();
    for g in groups_up_to(13).into_iter().filter(GroupSpec::hall_paige) {
        let n = g.n();
        for k in (2..n).filter(|k| (n - 1) % k == 0) {
            let nz: Vec<Element> = g.nonzero_elements().collect();
            let part = zero_sum_equipartition(&g, &nz, k, &b).unwrap();
            let fgt = find_fgt_orthomorphism(&g, k, &b).unwrap();
            if part.outcome.is_nonexistent() {
                assert!(fgt.outcome.is_nonexistent(), "{g} k={k}");
            }
            assert!(part.outcome.is_found() || !fgt.outcome.is_found());
        }
    }
}

#[test]
fn cycle_types_match_brute_force_on_z7_and_z5() {
    let b = SearchBudget::default();
    for (n, types) in [(5u32, vec!["1+4", "1+2^2"]), (7, vec!["1+2+4", "1+3^2", "1+2^3", "1+6"])] {
        let g = GroupSpec::cyclic(n).unwrap();
        for t in types {
            let want: CycleType = t.parse().unwrap();
            let mut brute = false;
            for_each_perm(g.n(), |p| {
                let perm: Vec<Element> = p.iter().map(|&i| g.element(i as u64).unwrap()).collect();
                brute |= verify_orthomorphism(&g, &perm).is_ok() && cycle_type(&perm) == want;
            });
            let s = find_cycle_type_orthomorphism(&g, &want, &b).unwrap();
            assert!(!matches!(s.outcome, Outcome::Unknown));
            assert_eq!(s.outcome.is_found(), brute, "Z{n} {t}");
            if let Some(o) = s.found() {
                assert_eq!(o.cycle_type(), want);
                assert_eq!(o.verify(), Ok(()));
            }
        }
    }
}

#[test]
fn queens_matchability() {
    let b = SearchBudget::default();
    let q = EquationSystem::queens();
    for n in [5u32, 7, 11, 13] {
        let g = GroupSpec::cyclic(n).unwrap();
        let w = matchable(&q, &g, &b).unwrap().found().unwrap_or_else(|| panic!("Z{n}"));
        assert_eq!(verify_matchable_witness(&q, &g, &w), Ok(()));
    }
    for n in [2u32, 3, 4, 6, 8, 9] {
        assert!(matchable(&q, &GroupSpec::cyclic(n).unwrap(), &b).unwrap().outcome.is_nonexistent(), "Z{n}");
    }
}
