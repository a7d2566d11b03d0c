use orthomorph::group::{Element, GroupSpec};
use orthomorph::patterns::{copy_to_subgraph, find_copy, CopyTargets, Pattern};
use orthomorph::sequencing::is_path_candidate;
use orthomorph::Outcome;
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (GroupSpec, Vec<Element>, Vec<bool>, Vec<Element>)> {
    (7u32..=31).prop_flat_map(|n| {
        let g = GroupSpec::cyclic(n).unwrap();
        let nz: Vec<Element> = g.nonzero_elements().collect();
        let all: Vec<Element> = g.elements().collect();
        (
            Just(g),
            prop::sample::subsequence(nz, 2..=4).prop_shuffle(),
            prop::collection::vec(prop::bool::weighted(0.5), n as usize),
            prop::sample::subsequence(all, 0..=3),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn path_copies_validate((g, colors, pool, forbidden) in instance(), seed in any::<u64>()) {
        prop_assume!(is_path_candidate(&g, &colors));
        let pattern = Pattern::path(&g, &colors).unwrap();
        let pool: Vec<Element> = g.elements().filter(|e| pool[e.index()]).collect();
        let targets = CopyTargets::new(&g, &pool, &g.elements().collect::<Vec<_>>(), &forbidden).unwrap();
        let allowed = |x: Element| pool.contains(&x) && !forbidden.contains(&x);
        // Walk v, v − c1, v − c1 − c2, …: a copy exists iff some start keeps every vertex allowed.
        let brute = g.elements().any(|v| {
            let mut x = v;
            let mut ok = allowed(x);
            for &c in &colors {
                x = g.sub(x, c);
                ok &= allowed(x);
            }
            ok
        });
        match find_copy(&pattern, &targets, seed, 50).unwrap() {
            Outcome::Found(copy) => {
                prop_assert!(brute);
                prop_assert!(copy.verify(&targets).is_ok());
                let sub = copy_to_subgraph(&copy);
                prop_assert_eq!(sub.edges.len(), colors.len());
                for (i, e) in sub.edges.iter().enumerate() {
                    prop_assert_eq!(e.color, colors[i]);
                    prop_assert_eq!(g.sub(e.from, e.to), e.color);
                    prop_assert_eq!(e.to, sub.vertices[i + 1]);
                }
                prop_assert!(sub.vertices.iter().all(|&v| allowed(v)));
            }
            Outcome::Nonexistent => prop_assert!(!brute),
            Outcome::Unknown => prop_assert!(false, "small instances are searched exhaustively"),
        }
    }
}
