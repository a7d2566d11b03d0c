//! Replays the checked-in corpus plus pseudo-random mutations of it.

use std::fs;
use std::path::Path;

type Body = fn(&[u8]);

const TARGETS: &[(&str, Body)] = &[
    ("group_spec", orthomorph_fuzz::group_spec),
    ("word", orthomorph_fuzz::word),
    ("pattern_json", orthomorph_fuzz::pattern_json),
    ("certificate", orthomorph_fuzz::certificate),
    ("cycle_type", orthomorph_fuzz::cycle_type),
    ("equation_system", orthomorph_fuzz::equation_system),
    ("equation", orthomorph_fuzz::equation),
    ("index_list", orthomorph_fuzz::index_list),
    ("color_sequence", orthomorph_fuzz::color_sequence),
];

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(target);
    let mut out: Vec<Vec<u8>> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| fs::read(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    out
}

#[test]
fn corpus_replays_cleanly() {
    for &(name, body) in TARGETS {
        let corpus = seeds(name);
        assert!(!corpus.is_empty(), "{name} has no seeds");
        corpus.iter().for_each(|s| body(s));
    }
}

#[test]
fn mutations_do_not_panic() {
    // xorshift keeps this dependency-free and reproducible.
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for &(name, body) in TARGETS {
        for seed in seeds(name) {
            for _ in 0..300 {
                let mut m = seed.clone();
                for _ in 0..=next() % 4 {
                    let r = next();
                    match r % 3 {
                        0 if !m.is_empty() => {
                            let i = (r >> 8) as usize % m.len();
                            m[i] = (r >> 32) as u8;
                        }
                        1 if !m.is_empty() => {
                            m.remove((r >> 8) as usize % m.len());
                        }
                        _ => {
                            let i = (r >> 8) as usize % (m.len() + 1);
                            m.insert(i, b"0123456789,;+-x[]{}:\"^ Z"[(r >> 32) as usize % 24]);
                        }
                    }
                }
                body(&m);
            }
        }
    }
}
