use orthomorph::absorbers::{find_pair_absorber, selection_schedule, verify_m_absorbs, Node};
use orthomorph::group::{Element, GroupSpec};
use orthomorph::rainbow::{perfect_matching_materialized, ColoredDigraphView};
use orthomorph::SearchBudget;

#[test]
fn schedules_are_bijections() {
    for l in 2..=12 {
        for deleted in 1..=l {
            let s = selection_schedule(l, deleted).unwrap();
            assert_eq!(s.len(), l - 1);
            assert!(!s.contains_key(&deleted));
            let mut ds: Vec<usize> = s.values().copied().collect();
            ds.sort();
            assert_eq!(ds, (1..l).collect::<Vec<_>>(), "l={l} deleted={deleted}");
            // Column j offers d_{j−1} (middle) and d_j (bottom, absent for the last column).
            for (&j, &d) in &s {
                assert!(d == j || d + 1 == j);
            }
        }
    }
}

#[test]
fn absorbers_pass_an_independent_matching_check() {
    let b = SearchBudget::default();
    for n in [11u32, 13] {
        let g = GroupSpec::cyclic(n).unwrap();
        let view = ColoredDigraphView::full(&g);
        for (x, z) in [(1u64, 2u64), (0, 5), (3, 7)] {
            let (x, z) = (g.element(x).unwrap(), g.element(z).unwrap());
            let inst = find_pair_absorber(x, z, &view, 3, &b).unwrap().found().unwrap();
            assert!(inst.reservoir.len() <= 30);
            assert!(verify_m_absorbs(&inst, &view, 3, &b).unwrap().passed());
            for extra in [x, z] {
                let mut vs: Vec<Element> = vec![extra];
                let mut cs: Vec<Element> = Vec::new();
                for node in &inst.reservoir {
                    match *node {
                        Node::Vertex(v) => vs.push(v),
                        Node::Color(c) => cs.push(c),
                    }
                }
                let sub = ColoredDigraphView::new(&g, &vs, &cs).unwrap();
                let m = perfect_matching_materialized(&sub, 3, &b, 1_000_000).unwrap().found();
                assert!(m.is_some(), "Z{n} {x} {z}");
            }
        }
    }
}
