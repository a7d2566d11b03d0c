//! Fuzz bodies, kept in a library so the corpus can be replayed by `cargo test`.

use orthomorph::certificate::Certificate;
use orthomorph::group::GroupSpec;
use orthomorph::patterns::{Pattern, Word};
use orthomorph::rainbow::Equation;
use orthomorph::sequencing::{parse_index_list, ColorSequence};
use orthomorph::solver::{CycleType, EquationSystem};

/// Certificates over larger groups are parsed but not re-verified.
const VERIFY_MAX_ORDER: usize = 64;

fn text(data: &[u8]) -> Option<&str> {
    std::str::from_utf8(data).ok()
}

/// First byte picks `Z_n` with `1 ≤ n ≤ 32`; the rest is the payload.
fn split_group(data: &[u8]) -> Option<(GroupSpec, &str)> {
    let (&b, rest) = data.split_first()?;
    let g = GroupSpec::cyclic(u32::from(b % 32) + 1).ok()?;
    Some((g, text(rest)?))
}

pub fn group_spec(data: &[u8]) {
    let Some(s) = text(data) else { return };
    if let Ok(g) = GroupSpec::parse(s) {
        assert_eq!(GroupSpec::parse(&g.to_string()).unwrap(), g);
    }
}

pub fn word(data: &[u8]) {
    let Some((g, s)) = split_group(data) else { return };
    if let Ok(w) = Word::parse(&g, s) {
        assert_eq!(Word::parse(&g, &w.to_string()).unwrap(), w);
    }
}

pub fn pattern_json(data: &[u8]) {
    let Some(s) = text(data) else { return };
    if let Ok(p) = Pattern::from_json(s) {
        let _ = p.check();
        assert_eq!(Pattern::from_json(&p.to_json().to_string()).unwrap(), p);
    }
}

pub fn certificate(data: &[u8]) {
    let Some(s) = text(data) else { return };
    if let Ok(c) = Certificate::from_json(s) {
        if c.group.n() <= VERIFY_MAX_ORDER {
            let _ = c.verify();
        }
        assert_eq!(Certificate::from_json(&c.to_json()).unwrap(), c);
    }
}

pub fn cycle_type(data: &[u8]) {
    let Some(s) = text(data) else { return };
    if let Ok(t) = s.parse::<CycleType>() {
        assert_eq!(t.to_string().parse::<CycleType>().unwrap(), t);
    }
}

pub fn equation_system(data: &[u8]) {
    let Some(s) = text(data) else { return };
    if let Ok(a) = EquationSystem::parse(s) {
        assert_eq!(EquationSystem::parse(&a.to_string()).unwrap(), a);
    }
}

pub fn equation(data: &[u8]) {
    let Some(s) = text(data) else { return };
    if let Ok(e) = Equation::parse(s) {
        assert!(e.signs.iter().all(|&x| x == 1 || x == -1));
    }
}

pub fn index_list(data: &[u8]) {
    let Some((g, s)) = split_group(data) else { return };
    if let Ok(xs) = parse_index_list(&g, s) {
        assert!(xs.iter().all(|&x| g.contains(x)));
    }
}

pub fn color_sequence(data: &[u8]) {
    let Some(s) = text(data) else { return };
    if let Ok(c) = ColorSequence::parse(s) {
        assert_eq!(ColorSequence::parse(&c.to_string()).unwrap(), c);
    }
}
