//! The Cayley digraph `K_G` (edge `(a, b)` coloured `a − b`), the hypergraph
//! `H_k` of rainbow directed `k`-cycles, perfect-matching search directly on
//! `K_G`, exact cover over a materialised `H_k`, a greedy near-perfect
//! matching heuristic, and degree statistics of equation hypergraphs.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::budget::{Meter, Outcome, Search, SearchBudget};
use crate::error::{Error, Result};
use crate::exact_cover::ExactCover;
use crate::group::{Element, GroupSpec};

/// Colour of the edge `(a, b)`.
pub fn edge_color(group: &GroupSpec, a: Element, b: Element) -> Result<Element> {
    group.check(a)?;
    group.check(b)?;
    if a == b {
        return Err(Error::domain("K_G has no loops"));
    }
    Ok(group.sub(a, b))
}

/// `K_G` restricted to a vertex set and a colour set, optionally
/// `|parts|`-partite with edges only from part `i` to part `i + 1 (mod |parts|)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredDigraphView {
    group: GroupSpec,
    vertices: Vec<bool>,
    colors: Vec<bool>,
    parts: Option<Vec<Vec<bool>>>,
}

fn mask(group: &GroupSpec, items: &[Element]) -> Result<Vec<bool>> {
    let mut m = vec![false; group.n()];
    for &e in items {
        m[group.check(e)?.index()] = true;
    }
    Ok(m)
}

impl ColoredDigraphView {
    pub fn new(group: &GroupSpec, vertices: &[Element], colors: &[Element]) -> Result<Self> {
        Ok(ColoredDigraphView {
            group: group.clone(),
            vertices: mask(group, vertices)?,
            colors: mask(group, colors)?,
            parts: None,
        })
    }

    pub fn full(group: &GroupSpec) -> Self {
        ColoredDigraphView {
            group: group.clone(),
            vertices: vec![true; group.n()],
            colors: vec![true; group.n()],
            parts: None,
        }
    }

    /// `V = C = G \ {0}`.
    pub fn nonzero(group: &GroupSpec) -> Self {
        let mut v = Self::full(group);
        v.vertices[0] = false;
        v.colors[0] = false;
        v
    }

    /// Vertices become the union of `parts`.
    pub fn with_parts(mut self, parts: &[Vec<Element>]) -> Result<Self> {
        let masks = parts.iter().map(|p| mask(&self.group, p)).collect::<Result<Vec<_>>>()?;
        self.vertices = vec![false; self.group.n()];
        for m in &masks {
            for (i, &b) in m.iter().enumerate() {
                self.vertices[i] |= b;
            }
        }
        self.parts = Some(masks);
        Ok(self)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn vertices(&self) -> Vec<Element> {
        self.members(&self.vertices)
    }

    pub fn colors(&self) -> Vec<Element> {
        self.members(&self.colors)
    }

    fn members(&self, m: &[bool]) -> Vec<Element> {
        (0..m.len()).filter(|&i| m[i]).map(|i| Element::from_index_unchecked(i as u32)).collect()
    }

    pub fn has_vertex(&self, v: Element) -> bool {
        self.group.contains(v) && self.vertices[v.index()]
    }

    pub fn has_color(&self, c: Element) -> bool {
        self.group.contains(c) && self.colors[c.index()]
    }

    /// Whether `(a, b)` is an edge of the view.
    pub fn has_edge(&self, a: Element, b: Element) -> bool {
        if a == b || !self.has_vertex(a) || !self.has_vertex(b) || !self.has_color(self.group.sub(a, b)) {
            return false;
        }
        match &self.parts {
            None => true,
            Some(parts) => {
                let l = parts.len();
                (0..l).any(|i| parts[i][a.index()] && parts[(i + 1) % l][b.index()])
            }
        }
    }
}

/// A rainbow directed cycle: `cycle[i] → cycle[i + 1]` has colour
/// `colors[i]`, and the minimum vertex comes first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HyperEdge {
    pub cycle: Vec<Element>,
    pub colors: Vec<Element>,
}

impl HyperEdge {
    pub fn vertex_set(&self) -> Vec<Element> {
        let mut v = self.cycle.clone();
        v.sort_unstable();
        v
    }

    pub fn color_set(&self) -> Vec<Element> {
        let mut c = self.colors.clone();
        c.sort_unstable();
        c
    }
}

fn cycle_colors(group: &GroupSpec, cycle: &[Element]) -> Vec<Element> {
    let k = cycle.len();
    (0..k).map(|i| group.sub(cycle[i], cycle[(i + 1) % k])).collect()
}

/// The hyperedge spanned by the directed cycle through `vertices` in order,
/// if that cycle is rainbow and lies in the view.
pub fn cycle_to_hyperedge(vertices: &[Element], view: &ColoredDigraphView) -> Result<Option<HyperEdge>> {
    let g = &view.group;
    if vertices.len() < 2 {
        return Err(Error::domain("a cycle needs at least two vertices"));
    }
    let mut sorted = vertices.to_vec();
    for &v in vertices {
        g.check(v)?;
    }
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::domain("cycle repeats a vertex"));
    }
    let k = vertices.len();
    if (0..k).any(|i| !view.has_edge(vertices[i], vertices[(i + 1) % k])) {
        return Ok(None);
    }
    let start = (0..k).min_by_key(|&i| vertices[i]).expect("nonempty");
    let cycle: Vec<Element> = (0..k).map(|i| vertices[(start + i) % k]).collect();
    let colors = cycle_colors(g, &cycle);
    let mut cs = colors.clone();
    cs.sort_unstable();
    if cs.windows(2).any(|w| w[0] == w[1]) {
        return Ok(None);
    }
    Ok(Some(HyperEdge { cycle, colors }))
}

/// Every hyperedge of `H_k` inside the view, at most `cap` of them; the flag
/// is true when the cap cut the enumeration short.
pub fn enumerate_hyperedges(view: &ColoredDigraphView, k: usize, cap: usize) -> Result<(Vec<HyperEdge>, bool)> {
    if k < 2 {
        return Err(Error::precondition("k must be at least 2"));
    }
    let g = &view.group;
    let verts = view.vertices();
    let mut out = Vec::new();
    let mut truncated = false;
    let mut used_v = BitSet::new(g.n());
    let mut used_c = BitSet::new(g.n());
    let mut path = Vec::with_capacity(k);
    for &v0 in &verts {
        if truncated {
            break;
        }
        path.push(v0);
        used_v.insert(v0.index());
        walk_cycles(view, k, &verts, &mut path, &mut used_v, &mut used_c, &mut |p| {
            if out.len() == cap {
                truncated = true;
                return true;
            }
            out.push(HyperEdge { cycle: p.to_vec(), colors: cycle_colors(g, p) });
            false
        });
        used_v.remove(v0.index());
        path.pop();
    }
    Ok((out, truncated))
}

/// Extends `path` to rainbow `k`-cycles whose other vertices exceed
/// `path[0]`; the visitor returns true to stop.
fn walk_cycles(
    view: &ColoredDigraphView,
    k: usize,
    verts: &[Element],
    path: &mut Vec<Element>,
    used_v: &mut BitSet,
    used_c: &mut BitSet,
    visit: &mut dyn FnMut(&[Element]) -> bool,
) -> bool {
    let g = &view.group;
    let cur = *path.last().expect("nonempty");
    let start = path[0];
    if path.len() == k {
        let c = g.sub(cur, start);
        return !used_c.contains(c.index()) && view.has_edge(cur, start) && visit(path);
    }
    for &w in verts {
        if w <= start || used_v.contains(w.index()) || !view.has_edge(cur, w) {
            continue;
        }
        let c = g.sub(cur, w);
        if used_c.contains(c.index()) {
            continue;
        }
        used_v.insert(w.index());
        used_c.insert(c.index());
        path.push(w);
        let stop = walk_cycles(view, k, verts, path, used_v, used_c, visit);
        path.pop();
        used_c.remove(c.index());
        used_v.remove(w.index());
        if stop {
            return true;
        }
    }
    false
}

/// Vertex-disjoint, colour-disjoint hyperedges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching {
    pub edges: Vec<HyperEdge>,
}

impl Matching {
    /// Re-checks every witness cycle against the view and pairwise
    /// disjointness; with `perfect`, also that every vertex and colour of the
    /// view is covered.
    pub fn verify(&self, view: &ColoredDigraphView, k: usize, perfect: bool) -> std::result::Result<(), String> {
        let g = &view.group;
        let mut vs = vec![false; g.n()];
        let mut cs = vec![false; g.n()];
        for (i, e) in self.edges.iter().enumerate() {
            if e.cycle.len() != k || e.colors.len() != k {
                return Err(format!("edge {i} is not a {k}-cycle"));
            }
            match cycle_to_hyperedge(&e.cycle, view) {
                Ok(Some(h)) if h == *e => {}
                Ok(Some(_)) => return Err(format!("edge {i} has wrong colours or is not canonical")),
                Ok(None) => return Err(format!("edge {i} is not a rainbow cycle of the view")),
                Err(err) => return Err(format!("edge {i}: {err}")),
            }
            if !g.sum(e.colors.iter().copied()).is_identity() {
                return Err(format!("edge {i} has colours summing to a nonzero element"));
            }
            for &v in &e.cycle {
                if std::mem::replace(&mut vs[v.index()], true) {
                    return Err(format!("vertex {v} is covered twice"));
                }
            }
            for &c in &e.colors {
                if std::mem::replace(&mut cs[c.index()], true) {
                    return Err(format!("colour {c} is used twice"));
                }
            }
        }
        if perfect && (vs != view.vertices || cs != view.colors) {
            return Err("matching is not perfect".into());
        }
        Ok(())
    }
}

fn check_perfect_shape(view: &ColoredDigraphView, k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::precondition("k must be at least 2"));
    }
    let nv = view.vertices.iter().filter(|&&b| b).count();
    let nc = view.colors.iter().filter(|&&b| b).count();
    if nv != nc {
        return Err(Error::precondition(format!("{nv} vertices but {nc} colours")));
    }
    if nv % k != 0 {
        return Err(Error::Divisibility(format!("{k} does not divide {nv}")));
    }
    Ok(())
}

/// A perfect matching of `H_k` inside the view. Colour sets of rainbow
/// cycles sum to zero, so a colour set with nonzero sum is refuted at once.
pub fn perfect_matching(view: &ColoredDigraphView, k: usize, budget: &SearchBudget) -> Result<Search<Matching>> {
    check_perfect_shape(view, k)?;
    if !view.group.sum(view.colors()).is_identity() {
        return Ok(Search { outcome: Outcome::Nonexistent, nodes: 0 });
    }
    perfect_matching_search(view, k, budget)
}

/// As [`perfect_matching`] without the colour-sum refutation: a plain
/// backtracking search growing one rainbow cycle at a time from the least
/// uncovered vertex.
pub fn perfect_matching_search(view: &ColoredDigraphView, k: usize, budget: &SearchBudget) -> Result<Search<Matching>> {
    check_perfect_shape(view, k)?;
    let mut s = FactorSearch {
        view,
        k,
        verts: view.vertices(),
        used_v: BitSet::new(view.group.n()),
        used_c: BitSet::new(view.group.n()),
        path: Vec::with_capacity(k),
        found: Vec::new(),
        meter: budget.meter(),
    };
    let ok = s.solve();
    let edges = std::mem::take(&mut s.found);
    Ok(s.meter.finish(ok.then_some(Matching { edges })))
}

struct FactorSearch<'a> {
    view: &'a ColoredDigraphView,
    k: usize,
    verts: Vec<Element>,
    used_v: BitSet,
    used_c: BitSet,
    path: Vec<Element>,
    found: Vec<HyperEdge>,
    meter: Meter,
}

impl FactorSearch<'_> {
    fn solve(&mut self) -> bool {
        if !self.meter.tick() {
            return false;
        }
        let Some(&v0) = self.verts.iter().find(|v| !self.used_v.contains(v.index())) else {
            return true;
        };
        self.used_v.insert(v0.index());
        self.path.push(v0);
        let ok = self.extend();
        self.path.pop();
        self.used_v.remove(v0.index());
        ok
    }

    fn extend(&mut self) -> bool {
        let g = &self.view.group;
        let cur = *self.path.last().expect("nonempty");
        let start = self.path[0];
        if self.path.len() == self.k {
            let c = g.sub(cur, start);
            if self.used_c.contains(c.index()) || !self.view.has_edge(cur, start) {
                return false;
            }
            self.used_c.insert(c.index());
            self.found.push(HyperEdge { cycle: self.path.clone(), colors: cycle_colors(g, &self.path) });
            let saved = std::mem::take(&mut self.path);
            let ok = self.solve();
            self.path = saved;
            if !ok {
                self.found.pop();
                self.used_c.remove(c.index());
            }
            return ok;
        }
        for i in 0..self.verts.len() {
            let w = self.verts[i];
            if self.used_v.contains(w.index()) || !self.view.has_edge(cur, w) {
                continue;
            }
            let c = g.sub(cur, w);
            if self.used_c.contains(c.index()) {
                continue;
            }
            if !self.meter.tick() {
                return false;
            }
            self.used_v.insert(w.index());
            self.used_c.insert(c.index());
            self.path.push(w);
            let ok = self.extend();
            self.path.pop();
            if ok {
                return true;
            }
            self.used_c.remove(c.index());
            self.used_v.remove(w.index());
            if self.meter.exhausted() {
                return false;
            }
        }
        false
    }
}

/// Perfect matching by exact cover over an explicitly materialised `H_k`.
/// Meant for small instances; more than `edge_cap` hyperedges is an error.
pub fn perfect_matching_materialized(
    view: &ColoredDigraphView,
    k: usize,
    budget: &SearchBudget,
    edge_cap: usize,
) -> Result<Search<Matching>> {
    check_perfect_shape(view, k)?;
    let (edges, truncated) = enumerate_hyperedges(view, k, edge_cap)?;
    if truncated {
        return Err(Error::Budget { size: edge_cap as u128 + 1, cap: edge_cap as u128 });
    }
    let n = view.group.n();
    let mut slot = vec![usize::MAX; 2 * n];
    let mut items = 0;
    for (i, &b) in view.vertices.iter().chain(&view.colors).enumerate() {
        if b {
            slot[i] = items;
            items += 1;
        }
    }
    let options: Vec<Vec<usize>> = edges
        .iter()
        .map(|e| {
            let v = e.cycle.iter().map(|x| slot[x.index()]);
            let c = e.colors.iter().map(|x| slot[n + x.index()]);
            v.chain(c).collect()
        })
        .collect();
    let mut dl = ExactCover::new(items, &options);
    Ok(dl
        .solve(budget)
        .map(|rows| Matching { edges: rows.into_iter().map(|r| edges[r].clone()).collect() }))
}

/// A greedy matching and what it leaves uncovered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearPerfect {
    pub matching: Matching,
    pub leftover_vertices: usize,
    pub leftover_colors: usize,
}

/// Node allowance for each randomised cycle search in the greedy pass.
const GREEDY_NODES_PER_START: u64 = 2_000;

/// Randomised greedy matching: visit vertices in a seeded random order and
/// take the first rainbow `k`-cycle found through each uncovered one.
pub fn near_perfect_matching(view: &ColoredDigraphView, k: usize, seed: u64) -> Result<NearPerfect> {
    if k < 2 {
        return Err(Error::precondition("k must be at least 2"));
    }
    let g = &view.group;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = view.vertices();
    order.shuffle(&mut rng);
    let mut used_v = BitSet::new(g.n());
    let mut used_c = BitSet::new(g.n());
    let mut edges = Vec::new();
    for &v in &order {
        if used_v.contains(v.index()) {
            continue;
        }
        let mut nbrs = view.vertices();
        nbrs.shuffle(&mut rng);
        let mut path = vec![v];
        used_v.insert(v.index());
        let mut budget = GREEDY_NODES_PER_START;
        if greedy_cycle(view, k, &nbrs, &mut path, &mut used_v, &mut used_c, &mut budget) {
            let e = cycle_to_hyperedge(&path, view)?.expect("search yields rainbow cycles");
            edges.push(e);
        } else {
            used_v.remove(v.index());
        }
    }
    let leftover_vertices = view.vertices().iter().filter(|v| !used_v.contains(v.index())).count();
    let leftover_colors = view.colors().iter().filter(|c| !used_c.contains(c.index())).count();
    Ok(NearPerfect { matching: Matching { edges }, leftover_vertices, leftover_colors })
}

/// On success the cycle's vertices and colours stay marked as used.
fn greedy_cycle(
    view: &ColoredDigraphView,
    k: usize,
    nbrs: &[Element],
    path: &mut Vec<Element>,
    used_v: &mut BitSet,
    used_c: &mut BitSet,
    budget: &mut u64,
) -> bool {
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let g = &view.group;
    let cur = *path.last().expect("nonempty");
    if path.len() == k {
        let c = g.sub(cur, path[0]);
        if used_c.contains(c.index()) || !view.has_edge(cur, path[0]) {
            return false;
        }
        used_c.insert(c.index());
        return true;
    }
    for &w in nbrs {
        if used_v.contains(w.index()) || !view.has_edge(cur, w) {
            continue;
        }
        let c = g.sub(cur, w);
        if used_c.contains(c.index()) {
            continue;
        }
        used_v.insert(w.index());
        used_c.insert(c.index());
        path.push(w);
        if greedy_cycle(view, k, nbrs, path, used_v, used_c, budget) {
            return true;
        }
        path.pop();
        used_c.remove(c.index());
        used_v.remove(w.index());
        if *budget == 0 {
            return false;
        }
    }
    false
}

/// `s_a·a + s_b·b + s_c·c = 0` with every sign ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub signs: [i8; 3],
}

impl Equation {
    /// Parses `a+b+c=0`, `a-b-c`, `-a+b-c = 0`, …
    pub fn parse(input: &str) -> Result<Equation> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
        let s = s.strip_suffix("=0").unwrap_or(&s);
        let mut signs = [0i8; 3];
        let mut rest = s;
        for (i, name) in ['a', 'b', 'c'].into_iter().enumerate() {
            let (sign, tail) = match rest.as_bytes().first() {
                Some(b'-') => (-1, &rest[1..]),
                Some(b'+') => (1, &rest[1..]),
                _ if i == 0 => (1, rest),
                _ => return Err(Error::parse("expected '+' or '-' between terms")),
            };
            rest = tail.strip_prefix(name).ok_or_else(|| Error::parse(format!("expected variable {name}")))?;
            signs[i] = sign;
        }
        if !rest.is_empty() {
            return Err(Error::parse("trailing characters after the equation"));
        }
        Ok(Equation { signs })
    }

    /// The unique `c` completing `(a, b)`.
    fn solve_c(&self, g: &GroupSpec, a: Element, b: Element) -> Element {
        let ab = g.add(g.mul(self.signs[0] as i64, a), g.mul(self.signs[1] as i64, b));
        g.mul(-(self.signs[2] as i64), ab)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypicalityReport {
    pub part_sizes: [usize; 3],
    pub min_degree: usize,
    pub max_degree: usize,
    /// Over same-part pairs, into each other part; `None` when no part has
    /// two vertices.
    pub min_pair_degree: Option<usize>,
    pub max_pair_degree: Option<usize>,
    /// The `(γ, p, n)`-typicality verdict, when parameters were supplied.
    pub typical: Option<bool>,
}

/// Degree statistics of the tripartite hypergraph on `parts` whose edges are
/// the solutions of `eq`; `params = (γ, p, n)` adds a typicality verdict.
pub fn typicality_stats(
    group: &GroupSpec,
    eq: Equation,
    parts: [&[Element]; 3],
    params: Option<(f64, f64, f64)>,
) -> Result<TypicalityReport> {
    let g = group;
    let n = g.n();
    let masks = [mask(g, parts[0])?, mask(g, parts[1])?, mask(g, parts[2])?];
    let members: Vec<Vec<Element>> = masks
        .iter()
        .map(|m| (0..n).filter(|&i| m[i]).map(|i| Element::from_index_unchecked(i as u32)).collect())
        .collect();
    // nbr[p][x] = neighbourhood of x (in part p) as one bitset per other part.
    let mut nbr: Vec<Vec<[BitSet; 3]>> = (0..3)
        .map(|_| (0..n).map(|_| [BitSet::new(n), BitSet::new(n), BitSet::new(n)]).collect())
        .collect();
    let mut degree = [vec![0usize; n], vec![0usize; n], vec![0usize; n]];
    for &a in &members[0] {
        for &b in &members[1] {
            let c = eq.solve_c(g, a, b);
            if !masks[2][c.index()] {
                continue;
            }
            let (ai, bi, ci) = (a.index(), b.index(), c.index());
            degree[0][ai] += 1;
            degree[1][bi] += 1;
            degree[2][ci] += 1;
            nbr[0][ai][1].insert(bi);
            nbr[0][ai][2].insert(ci);
            nbr[1][bi][0].insert(ai);
            nbr[1][bi][2].insert(ci);
            nbr[2][ci][0].insert(ai);
            nbr[2][ci][1].insert(bi);
        }
    }
    let degrees: Vec<usize> = (0..3).flat_map(|p| members[p].iter().map(|x| degree[p][x.index()]).collect::<Vec<_>>()).collect();
    let mut pair_min: Option<usize> = None;
    let mut pair_max: Option<usize> = None;
    for p in 0..3 {
        for (i, u) in members[p].iter().enumerate() {
            for v in &members[p][i + 1..] {
                for q in (0..3).filter(|&q| q != p) {
                    let nu = &nbr[p][u.index()][q];
                    let nv = &nbr[p][v.index()][q];
                    let d = nu.iter().filter(|&z| nv.contains(z)).count();
                    pair_min = Some(pair_min.map_or(d, |m| m.min(d)));
                    pair_max = Some(pair_max.map_or(d, |m| m.max(d)));
                }
            }
        }
    }
    let part_sizes = [members[0].len(), members[1].len(), members[2].len()];
    let typical = params.map(|(gamma, p, nn)| {
        let within = |x: usize, centre: f64| {
            let x = x as f64;
            (1.0 - gamma) * centre <= x && x <= (1.0 + gamma) * centre
        };
        part_sizes.iter().all(|&s| within(s, nn))
            && degrees.iter().all(|&d| within(d, p * nn))
            && pair_min.is_none_or(|m| within(m, p * p * nn))
            && pair_max.is_none_or(|m| within(m, p * p * nn))
    });
    Ok(TypicalityReport {
        part_sizes,
        min_degree: degrees.iter().copied().min().unwrap_or(0),
        max_degree: degrees.iter().copied().max().unwrap_or(0),
        min_pair_degree: pair_min,
        max_pair_degree: pair_max,
        typical,
    })
}
