use orthomorph::{enumerate_abelian_groups, Element, GroupSpec};
use proptest::prelude::*;

fn group_strategy(max_order: u32) -> impl Strategy<Value = GroupSpec> {
    prop::collection::vec(2u32..=9, 1..=3)
        .prop_filter("order bound", move |f| f.iter().product::<u32>() <= max_order)
        .prop_map(|f| GroupSpec::new(&f).unwrap())
}

fn group_and_elements(max_order: u32) -> impl Strategy<Value = (GroupSpec, u64, u64)> {
    group_strategy(max_order).prop_flat_map(|g| {
        let n = g.n() as u64;
        (Just(g), 0..n, 0..n)
    })
}

/// Addition through mixed-radix coordinates, independent of `GroupSpec::add`.
fn add_by_coords(g: &GroupSpec, a: Element, b: Element) -> Element {
    let (ca, cb) = (g.coords(a), g.coords(b));
    let c: Vec<u32> = g.factors().iter().zip(ca.iter().zip(&cb)).map(|(&n, (&x, &y))| (x + y) % n).collect();
    g.from_coords(&c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn abelian_group_laws((g, i, j) in group_and_elements(60)) {
        let (a, b) = (g.element(i).unwrap(), g.element(j).unwrap());
        prop_assert_eq!(g.add(a, b), g.add(b, a));
        prop_assert_eq!(g.add(a, b), add_by_coords(&g, a, b));
        prop_assert!(g.add(a, g.neg(a)).is_identity());
        prop_assert!(g.mul(g.order() as i64, a).is_identity());
        prop_assert_eq!(g.mul(-1, a), g.neg(a));
        prop_assert_eq!(g.sub(g.add(a, b), b), a);
    }

    #[test]
    fn index_round_trip((g, i, _) in group_and_elements(60)) {
        prop_assert_eq!(g.element(i).unwrap().index() as u64, i);
        prop_assert!(g.element(g.n() as u64).is_err());
    }

    #[test]
    fn hall_paige_is_a_zero_sum((g, _, _) in group_and_elements(120)) {
        // Sum in reverse order through coordinates.
        let mut acc = g.identity();
        for e in g.elements().collect::<Vec<_>>().into_iter().rev() {
            acc = add_by_coords(&g, acc, e);
        }
        prop_assert_eq!(g.hall_paige(), acc.is_identity());
    }

    #[test]
    fn display_parse_round_trip(g in group_strategy(200)) {
        prop_assert_eq!(GroupSpec::parse(&g.to_string()).unwrap(), g);
    }
}

fn image_size(g: &GroupSpec, t: i64) -> usize {
    let mut seen = vec![false; g.n()];
    g.elements().for_each(|a| seen[g.mul(t, a).index()] = true);
    seen.into_iter().filter(|&b| b).count()
}

#[test]
fn two_three_bound_up_to_300() {
    for n in 1..=300 {
        for g in enumerate_abelian_groups(n) {
            let m = image_size(&g, 2).max(image_size(&g, 3)) as u128;
            assert!(m.pow(5) >= n as u128, "{g}");
            assert!(g.two_three_lemma_holds(), "{g}");
            assert_eq!(g.mult_image_size(2) as usize, image_size(&g, 2), "{g}");
        }
    }
}

#[test]
fn non_generic_elements_are_few() {
    for n in 1..=300 {
        for g in enumerate_abelian_groups(n) {
            let k = g.non_generic_elements().len();
            assert!(k * k <= n as usize, "{g}: {k} non-generic elements");
        }
    }
}

#[test]
fn class_counts_match_partition_numbers() {
    // Number of abelian groups of order p^a is the partition number of a.
    let partitions = [1, 1, 2, 3, 5, 7, 11, 15];
    for (a, &p) in partitions.iter().enumerate().skip(1) {
        assert_eq!(enumerate_abelian_groups(2u32.pow(a as u32)).len(), p, "2^{a}");
    }
    assert_eq!(enumerate_abelian_groups(72).len(), 6);
}
