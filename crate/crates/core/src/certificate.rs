//! Self-contained JSON certificates and their independent re-verification.
//!
//! A certificate carries the group, the claimed object and enough context
//! to re-check it from scratch. The stored `verified` flag is informational
//! only and never consulted.

use serde::{Deserialize, Serialize};

use crate::absorbers::{verify_m_absorbs, AbsorberInstance, Node};
use crate::budget::SearchBudget;
use crate::error::{Error, Result};
use crate::families::{check_good_families, GoodFamilies};
use crate::group::{Element, GroupSpec};
use crate::rainbow::{ColoredDigraphView, Matching};
use crate::sequencing::{is_cycle_candidate, is_path_candidate, is_rainbow};
use crate::solver::{cycle_type, verify_matchable_witness, verify_orthomorphism, CycleType, EquationSystem};
use crate::zerosum::Partition;

/// Input size limit for certificate parsing.
pub const MAX_CERTIFICATE_BYTES: usize = 64 << 20;

/// Largest `k` a certificate may name.
pub const MAX_K: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Cycle,
    Path,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub group: GroupSpec,
    #[serde(flatten)]
    pub body: Body,
    #[serde(default)]
    pub verified: bool,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Body {
    Orthomorphism {
        perm: Vec<Element>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cycle_type: Option<String>,
    },
    Partition {
        universe: Vec<Element>,
        target: Element,
        blocks: Vec<Vec<Element>>,
        /// When present, every block must also be a rainbow candidate of this shape.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ordered: Option<Shape>,
    },
    Matching {
        k: usize,
        vertices: Vec<Element>,
        colors: Vec<Element>,
        matching: Matching,
    },
    Matchable {
        matrix: EquationSystem,
        witness: Vec<Vec<Element>>,
    },
    Sequence {
        shape: Shape,
        sequence: Vec<Element>,
    },
    GoodFamilies {
        k: usize,
        families: GoodFamilies,
    },
    Absorber {
        k: usize,
        vertices: Vec<Element>,
        colors: Vec<Element>,
        instance: AbsorberInstance,
    },
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Orthomorphism { .. } => "orthomorphism",
            Body::Partition { .. } => "partition",
            Body::Matching { .. } => "matching",
            Body::Matchable { .. } => "matchable",
            Body::Sequence { .. } => "sequence",
            Body::GoodFamilies { .. } => "good_families",
            Body::Absorber { .. } => "absorber",
        }
    }

    fn elements(&self) -> Vec<Element> {
        let flat = |v: &Vec<Vec<Element>>| v.iter().flatten().copied().collect::<Vec<_>>();
        match self {
            Body::Orthomorphism { perm, .. } => perm.clone(),
            Body::Partition { universe, target, blocks, .. } => {
                let mut all = flat(blocks);
                all.extend(universe);
                all.push(*target);
                all
            }
            Body::Matching { vertices, colors, matching, .. } => {
                let mut all: Vec<Element> = vertices.iter().chain(colors).copied().collect();
                for e in &matching.edges {
                    all.extend(e.cycle.iter().chain(&e.colors));
                }
                all
            }
            Body::Matchable { witness, .. } => flat(witness),
            Body::Sequence { sequence, .. } => sequence.clone(),
            Body::GoodFamilies { families, .. } => {
                let mut all: Vec<Element> = families.f_tuples.iter().flatten().copied().collect();
                all.extend(flat(&families.s_tuples));
                all.extend([families.f, families.s, families.q]);
                all
            }
            Body::Absorber { vertices, colors, instance, .. } => {
                let mut all: Vec<Element> = vertices.iter().chain(colors).copied().collect();
                for node in instance.reservoir.iter().chain(instance.family.iter().flatten()) {
                    all.push(match *node {
                        Node::Vertex(v) | Node::Color(v) => v,
                    });
                }
                all
            }
        }
    }
}

impl Certificate {
    pub fn new(group: &GroupSpec, body: Body, seed: u64) -> Self {
        let mut c = Certificate { group: group.clone(), body, verified: false, seed };
        c.verified = c.verify().is_ok();
        c
    }

    pub fn from_json(input: &str) -> Result<Self> {
        if input.len() > MAX_CERTIFICATE_BYTES {
            return Err(Error::parse("certificate too large"));
        }
        serde_json::from_str(input).map_err(|e| Error::parse(format!("certificate: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialise")
    }

    /// Re-checks the claim; the error names the first violated invariant.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let g = &self.group;
        if let Some(e) = self.body.elements().into_iter().find(|&e| !g.contains(e)) {
            return Err(format!("element {e} lies outside {g}"));
        }
        match &self.body {
            Body::Orthomorphism { perm, cycle_type: want } => {
                verify_orthomorphism(g, perm).map_err(|v| v.to_string())?;
                if let Some(want) = want {
                    let want: CycleType = want.parse().map_err(|e: Error| e.to_string())?;
                    let got = cycle_type(perm);
                    if got != want {
                        return Err(format!("cycle type is {got}, claimed {want}"));
                    }
                }
                Ok(())
            }
            Body::Partition { universe, target, blocks, ordered } => {
                let p = Partition { group: g.clone(), blocks: blocks.clone() };
                p.verify(universe, *target)?;
                if let Some(shape) = ordered {
                    for (i, b) in blocks.iter().enumerate() {
                        let ok = is_rainbow(b)
                            && match shape {
                                Shape::Cycle => is_cycle_candidate(g, b).unwrap_or(false),
                                Shape::Path => is_path_candidate(g, b),
                            };
                        if !ok {
                            return Err(format!("block {i} is not a rainbow {shape:?} candidate"));
                        }
                    }
                }
                Ok(())
            }
            Body::Matching { k, vertices, colors, matching } => {
                check_k(*k)?;
                let view = ColoredDigraphView::new(g, vertices, colors).map_err(|e| e.to_string())?;
                matching.verify(&view, *k, true)
            }
            Body::Matchable { matrix, witness } => verify_matchable_witness(matrix, g, witness),
            Body::Sequence { shape, sequence } => {
                let ok = match shape {
                    Shape::Cycle => is_cycle_candidate(g, sequence).map_err(|e| e.to_string())?,
                    Shape::Path => is_path_candidate(g, sequence),
                };
                if !ok {
                    return Err(format!("sequence is not a {shape:?} candidate"));
                }
                if !is_rainbow(sequence) {
                    return Err("sequence repeats an element".into());
                }
                Ok(())
            }
            Body::GoodFamilies { k, families } => {
                check_k(*k)?;
                let report = check_good_families(families, g, *k);
                if report.passed() {
                    Ok(())
                } else {
                    Err(report.failures.first().cloned().unwrap_or_else(|| "families fail".into()))
                }
            }
            Body::Absorber { k, vertices, colors, instance } => {
                check_k(*k)?;
                if *k < 2 {
                    return Err("k must be at least 2".into());
                }
                let view = ColoredDigraphView::new(g, vertices, colors).map_err(|e| e.to_string())?;
                let verdict =
                    verify_m_absorbs(instance, &view, *k, &SearchBudget::default()).map_err(|e| e.to_string())?;
                if verdict.passed() {
                    Ok(())
                } else {
                    Err(format!("absorption check: {verdict:?}"))
                }
            }
        }
    }
}

fn check_k(k: usize) -> std::result::Result<(), String> {
    if k > MAX_K {
        return Err(format!("k = {k} exceeds {MAX_K}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rainbow::perfect_matching;
    use crate::solver::find_fgt_orthomorphism;

    fn z(n: u32) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    fn els(xs: &[u32]) -> Vec<Element> {
        xs.iter().map(|&x| Element::from_index_unchecked(x)).collect()
    }

    #[test]
    fn orthomorphism_round_trip_and_corruption() {
        let g = z(7);
        let o = find_fgt_orthomorphism(&g, 3, &SearchBudget::default()).unwrap().found().unwrap();
        let c = Certificate::new(&g, Body::Orthomorphism { perm: o.perm.clone(), cycle_type: Some("1+3^2".into()) }, 0);
        assert!(c.verified);
        let json = c.to_json();
        assert!(json.contains("\"kind\": \"orthomorphism\""));
        let back = Certificate::from_json(&json).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.verify(), Ok(()));

        let mut bad = back.clone();
        if let Body::Orthomorphism { perm, .. } = &mut bad.body {
            perm[1] = perm[2];
        }
        assert!(bad.verify().is_err());
        let mut wrong_type = back;
        if let Body::Orthomorphism { cycle_type, .. } = &mut wrong_type.body {
            *cycle_type = Some("1+2^3".into());
        }
        assert!(wrong_type.verify().unwrap_err().contains("cycle type"));
    }

    #[test]
    fn partition_checks() {
        let g = z(7);
        let body = Body::Partition {
            universe: els(&[1, 2, 3, 4, 5, 6]),
            target: Element::IDENTITY,
            blocks: vec![els(&[1, 2, 4]), els(&[3, 5, 6])],
            ordered: Some(Shape::Cycle),
        };
        assert!(Certificate::new(&g, body, 0).verified);
        let bad = Body::Partition {
            universe: els(&[1, 2, 3, 4, 5, 6]),
            target: Element::IDENTITY,
            blocks: vec![els(&[1, 2, 3]), els(&[4, 5, 6])],
            ordered: None,
        };
        assert!(Certificate::new(&g, bad, 0).verify().unwrap_err().contains("sums to"));
    }

    #[test]
    fn matching_and_sequence() {
        let g = z(7);
        let view = ColoredDigraphView::nonzero(&g);
        let m = perfect_matching(&view, 3, &SearchBudget::default()).unwrap().found().unwrap();
        let body = Body::Matching { k: 3, vertices: view.vertices(), colors: view.colors(), matching: m };
        let c = Certificate::new(&g, body, 0);
        assert!(c.verified);
        assert_eq!(Certificate::from_json(&c.to_json()).unwrap(), c);

        let seq = Body::Sequence { shape: Shape::Cycle, sequence: els(&[1, 2, 4]) };
        assert!(Certificate::new(&g, seq, 0).verified);
        let seq = Body::Sequence { shape: Shape::Path, sequence: els(&[1, 6]) };
        assert!(!Certificate::new(&g, seq, 0).verified);
    }

    #[test]
    fn hostile_inputs_are_rejected() {
        let g = z(5);
        let c = Certificate::new(&g, Body::Orthomorphism { perm: els(&[0, 9, 1, 2, 3]), cycle_type: None }, 0);
        assert!(c.verify().unwrap_err().contains("outside"));
        assert!(Certificate::from_json("{\"group\":\"Z5\",\"kind\":\"nope\"}").is_err());
        assert!(Certificate::from_json("[]").is_err());
        let forged = r#"{"group":"Z4","kind":"orthomorphism","perm":[0,1,2,3],"verified":true}"#;
        assert!(Certificate::from_json(forged).unwrap().verify().is_err());
    }
}
