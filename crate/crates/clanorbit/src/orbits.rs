//! Weak order, edge degrees and the full closure order on the orbits of a case.

use crate::clans::{CaseId, Clan, RootType, Symbol};
use crate::weyl::WeylElement;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("simple root index {0} is out of range for case {1}")]
    BadRoot(usize, CaseId),
    #[error("clan {0} does not belong to case {1}")]
    NotInFamily(String, CaseId),
    #[error("root {1} does not ascend from {0}")]
    NoAscent(String, usize),
    #[error("computed order relates {0} < {1}, which the induced order does not")]
    NotContained(String, String),
    #[error("weak order has a cycle")]
    Cyclic,
}

/// Type-A move of the ambient clan at 0-based positions (i, i+1); `None` if the root does not ascend.
pub fn ambient_move(c: &Clan, i: usize) -> Option<Clan> {
    let s = c.symbols();
    let (a, b) = (s[i], s[i + 1]);
    let swapped = || {
        let mut t = s.to_vec();
        t.swap(i, i + 1);
        c.with_symbols(t)
    };
    match (a.is_sign(), b.is_sign()) {
        (false, false) if a != b => (c.mate(i) < c.mate(i + 1)).then(swapped),
        (true, false) => (c.mate(i + 1).unwrap() > i + 1).then(swapped),
        (false, true) => (c.mate(i).unwrap() < i).then(swapped),
        (true, true) if a != b => {
            let mut t = s.to_vec();
            t[i] = Symbol::Pair(u32::MAX);
            t[i + 1] = Symbol::Pair(u32::MAX);
            Some(c.with_symbols(t))
        }
        _ => None,
    }
}

fn apply_word(c: &Clan, word: &[usize]) -> Clan {
    word.iter().fold(c.clone(), |acc, &a| {
        ambient_move(&acc, a - 1).unwrap_or(acc)
    })
}

fn check_root(case: &CaseId, i: usize) -> Result<(), OrbitError> {
    let n = case.rank();
    let max = if case.root_type() == RootType::A {
        n - 1
    } else {
        n
    };
    if i == 0 || i > max {
        Err(OrbitError::BadRoot(i, *case))
    } else {
        Ok(())
    }
}

/// Number of simple roots of G.
pub fn num_simple_roots(case: &CaseId) -> usize {
    if case.root_type() == RootType::A {
        case.rank() - 1
    } else {
        case.rank()
    }
}

/// s_{α_i} · c. Roots of G act on the ambient clan through paired ambient moves;
/// a result outside the family counts as no move.
pub fn weak_move(case: &CaseId, c: &Clan, i: usize) -> Result<Clan, OrbitError> {
    check_root(case, i)?;
    if !case.contains(c) {
        return Err(OrbitError::NotInFamily(c.to_string(), *case));
    }
    let n = case.rank();
    let big = case.ambient_len();
    let out = match case.root_type() {
        RootType::A => apply_word(c, &[i]),
        _ if i < n => apply_word(c, &[i, big - i]),
        RootType::C => apply_word(c, &[n]),
        RootType::B => apply_word(c, &[n, n + 1, n]),
        RootType::D => {
            let swap = |x: &Clan| {
                let mut t = x.symbols().to_vec();
                t.swap(n - 1, n);
                x.with_symbols(t)
            };
            swap(&apply_word(&swap(c), &[n - 1, n + 1]))
        }
    };
    Ok(if case.contains(&out) { out } else { c.clone() })
}

/// The simple reflection s_i of W(G) as a signed permutation.
pub fn simple_reflection(case: &CaseId, i: usize) -> Result<WeylElement, OrbitError> {
    check_root(case, i)?;
    let n = case.rank();
    let mut v: Vec<i32> = (1..=n as i32).collect();
    let ty = case.root_type();
    if ty == RootType::A || i < n {
        v.swap(i - 1, i);
    } else if ty == RootType::D {
        v[n - 2] = -(n as i32);
        v[n - 1] = -(n as i32 - 1);
    } else {
        v[n - 1] = -(n as i32);
    }
    Ok(WeylElement::new(v, ty).expect("simple reflections are valid"))
}

/// w × c: permute the ambient symbols by the ambient permutation of w.
pub fn cross_action(c: &Clan, w: &WeylElement) -> Clan {
    let perm = w.ambient_permutation();
    let mut out = c.symbols().to_vec();
    for (k, &s) in c.symbols().iter().enumerate() {
        out[perm[k] - 1] = s;
    }
    c.with_symbols(out)
}

/// 2 when s_i × c = c (type II non-compact root), else 1.
pub fn edge_degree(case: &CaseId, c: &Clan, i: usize) -> Result<u8, OrbitError> {
    if weak_move(case, c, i)? == *c {
        return Err(OrbitError::NoAscent(c.to_string(), i));
    }
    let s = simple_reflection(case, i)?;
    Ok(if cross_action(c, &s) == *c { 2 } else { 1 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeakEdge {
    pub source: usize,
    pub target: usize,
    pub root: usize,
    pub degree: u8,
}

/// A fixed-size set of node indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSet(Vec<u64>);

impl BitSet {
    pub fn new(n: usize) -> BitSet {
        BitSet(vec![0; n.div_ceil(64)])
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.0[w] & b == 0;
        self.0[w] |= b;
        fresh
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64)
                .filter(move |b| bits >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
}

/// Orbits of a case with their weak order and, once computed, the full closure order.
#[derive(Debug, Clone)]
pub struct OrbitPoset {
    pub case: CaseId,
    pub nodes: Vec<Clan>,
    pub edges: Vec<WeakEdge>,
    /// `moves[i-1][z]` = index of s_i · node z (z itself when s_i does not ascend).
    pub moves: Vec<Vec<usize>>,
    pub rank: Vec<usize>,
    /// `down[z]` = nodes below or equal to z in the full order.
    pub down: Option<Vec<BitSet>>,
    index: HashMap<Clan, usize>,
}

impl OrbitPoset {
    pub fn index_of(&self, c: &Clan) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn closed(&self) -> Vec<usize> {
        let mut has_in = vec![false; self.nodes.len()];
        for e in &self.edges {
            has_in[e.target] = true;
        }
        (0..self.nodes.len()).filter(|&i| !has_in[i]).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.nodes.len()];
        for e in &self.edges {
            has_out[e.source] = true;
        }
        (0..self.nodes.len()).filter(|&i| !has_out[i]).collect()
    }

    pub fn top(&self) -> usize {
        self.rank
            .iter()
            .enumerate()
            .max_by_key(|&(i, r)| (*r, std::cmp::Reverse(i)))
            .unwrap()
            .0
    }

    /// Node indices sorted by rank, ties by enumeration order.
    pub fn by_rank(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by_key(|&i| (self.rank[i], i));
        order
    }

    /// a ≤ b in the computed full order.
    pub fn full_leq(&self, a: usize, b: usize) -> bool {
        self.down
            .as_ref()
            .expect("full order computed")
            .get(b)
            .unwrap()
            .contains(a)
    }
}

/// Nodes, ascending weak edges with degrees, and the weak rank.
pub fn weak_order_graph(case: &CaseId) -> Result<OrbitPoset, OrbitError> {
    let nodes = case.family();
    let index: HashMap<Clan, usize> = nodes
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let roots = num_simple_roots(case);
    let moves: Vec<Vec<usize>> = (1..=roots)
        .map(|r| {
            nodes
                .par_iter()
                .map(|c| {
                    let d = weak_move(case, c, r)?;
                    index
                        .get(&d)
                        .copied()
                        .ok_or_else(|| OrbitError::NotInFamily(d.to_string(), *case))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let mut edges = Vec::new();
    for (z, c) in nodes.iter().enumerate() {
        for r in 1..=roots {
            let t = moves[r - 1][z];
            if t != z {
                edges.push(WeakEdge {
                    source: z,
                    target: t,
                    root: r,
                    degree: edge_degree(case, c, r)?,
                });
            }
        }
    }
    let rank = longest_path_rank(nodes.len(), &edges)?;
    Ok(OrbitPoset {
        case: *case,
        nodes,
        edges,
        moves,
        rank,
        down: None,
        index,
    })
}

fn longest_path_rank(n: usize, edges: &[WeakEdge]) -> Result<Vec<usize>, OrbitError> {
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in edges {
        indeg[e.target] += 1;
        out[e.source].push(e.target);
    }
    let mut rank = vec![0usize; n];
    let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &t in &out[v] {
            rank[t] = rank[t].max(rank[v] + 1);
            indeg[t] -= 1;
            if indeg[t] == 0 {
                queue.push(t);
            }
        }
    }
    if seen == n {
        Ok(rank)
    } else {
        Err(OrbitError::Cyclic)
    }
}

/// Saturates down-sets: closed orbits see only themselves; along an edge Q → s·Q the down-set
/// of s·Q gains every Z with s·Z ∈ s·down(Q). Iterates in rank order until stable.
pub fn full_closure_order(poset: &mut OrbitPoset) {
    let n = poset.nodes.len();
    let mut down: Vec<BitSet> = (0..n)
        .map(|i| {
            let mut b = BitSet::new(n);
            b.insert(i);
            b
        })
        .collect();
    let mut edges = poset.edges.clone();
    edges.sort_by_key(|e| (poset.rank[e.source], e.source, e.root));
    loop {
        let mut changed = false;
        for e in &edges {
            let mv = &poset.moves[e.root - 1];
            let mut image = BitSet::new(n);
            for z in down[e.source].iter() {
                image.insert(mv[z]);
            }
            for (z, &moved) in mv.iter().enumerate() {
                if image.contains(moved) && down[e.target].insert(z) {
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    poset.down = Some(down);
}

/// Weak order plus full order.
pub fn orbit_poset(case: &CaseId) -> Result<OrbitPoset, OrbitError> {
    let mut p = weak_order_graph(case)?;
    full_closure_order(&mut p);
    Ok(p)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub case: CaseId,
    pub coincides: bool,
    /// Pairs (a, b) with a ≤ b in the induced order but not in the computed order.
    pub witnesses: Vec<(String, String)>,
}

/// Compares the computed closure order with the order induced from the ambient clans.
pub fn check_conjecture(poset: &OrbitPoset) -> Result<ConjectureReport, OrbitError> {
    let tables: Vec<_> = poset.nodes.iter().map(|c| c.rank_table()).collect();
    let n = poset.nodes.len();
    let mut witnesses = Vec::new();
    for b in 0..n {
        for a in 0..n {
            let induced = tables[a].leq(&tables[b]);
            let computed = poset.full_leq(a, b);
            if computed && !induced {
                return Err(OrbitError::NotContained(
                    poset.nodes[a].to_string(),
                    poset.nodes[b].to_string(),
                ));
            }
            if induced && !computed {
                witnesses.push((poset.nodes[a].to_string(), poset.nodes[b].to_string()));
            }
        }
    }
    Ok(ConjectureReport {
        case: poset.case,
        coincides: witnesses.is_empty(),
        witnesses,
    })
}

/// Graphviz rendering: edges labelled by root index, degree-2 edges blue, ranks aligned.
pub fn to_dot(poset: &OrbitPoset) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph \"{}\" {{", poset.case);
    let _ = writeln!(s, "  rankdir=BT;");
    let _ = writeln!(s, "  node [shape=plaintext];");
    for (i, c) in poset.nodes.iter().enumerate() {
        let _ = writeln!(s, "  n{i} [label=\"{c}\"];");
    }
    let max_rank = poset.rank.iter().copied().max().unwrap_or(0);
    for r in 0..=max_rank {
        let ids: Vec<String> = (0..poset.nodes.len())
            .filter(|&i| poset.rank[i] == r)
            .map(|i| format!("n{i};"))
            .collect();
        let _ = writeln!(s, "  {{ rank=same; {} }}", ids.join(" "));
    }
    for e in &poset.edges {
        let color = if e.degree == 2 { ", color=blue" } else { "" };
        let _ = writeln!(
            s,
            "  n{} -> n{} [label=\"{}\"{}];",
            e.source, e.target, e.root, color
        );
    }
    s.push_str("}\n");
    s
}

#[derive(Serialize)]
struct EdgeJson {
    source: String,
    target: String,
    root: usize,
    degree: u8,
}

#[derive(Serialize)]
struct PosetJson {
    case: String,
    nodes: Vec<String>,
    rank: Vec<usize>,
    edges: Vec<EdgeJson>,
    down_sets: Option<Vec<Vec<String>>>,
}

impl Serialize for OrbitPoset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let name = |i: usize| self.nodes[i].to_string();
        PosetJson {
            case: self.case.to_string(),
            nodes: self.nodes.iter().map(|c| c.to_string()).collect(),
            rank: self.rank.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    source: name(e.source),
                    target: name(e.target),
                    root: e.root,
                    degree: e.degree,
                })
                .collect(),
            down_sets: self
                .down
                .as_ref()
                .map(|d| d.iter().map(|b| b.iter().map(name).collect()).collect()),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clans::CaseKind;

    fn a(p: usize, q: usize) -> CaseId {
        CaseId::new(CaseKind::AGlPq, p, q).unwrap()
    }

    fn clan(s: &str) -> Clan {
        Clan::parse_infer(s).unwrap()
    }

    #[test]
    fn type_a_moves() {
        let case = a(3, 2);
        assert_eq!(weak_move(&case, &clan("112+2"), 2).unwrap(), clan("121+2"));
        assert_eq!(weak_move(&case, &clan("1+-1+"), 2).unwrap(), clan("1221+"));
        assert_eq!(weak_move(&case, &clan("1+122"), 2).unwrap(), clan("1+122"));
        assert!(weak_move(&case, &clan("1+122"), 5).is_err());
    }

    #[test]
    fn cross_action_examples() {
        let s1 = simple_reflection(&a(2, 2), 1).unwrap();
        assert_eq!(cross_action(&clan("+-11"), &s1), clan("-+11"));
        let s2 = simple_reflection(&a(2, 2), 2).unwrap();
        assert_eq!(cross_action(&clan("1+-1"), &s2), clan("1-+1"));
        let id = WeylElement::identity(4, RootType::A);
        assert_eq!(cross_action(&clan("1+-1"), &id), clan("1+-1"));
    }

    #[test]
    fn degrees() {
        let case = a(2, 2);
        let p = weak_order_graph(&case).unwrap();
        assert!(p.edges.iter().all(|e| e.degree == 1));
        let c4 = CaseId::gl(CaseKind::CSpGl, 2).unwrap();
        let p4 = weak_order_graph(&c4).unwrap();
        assert_eq!(p4.nodes.len(), 11);
        assert!(edge_degree(&c4, &clan("1221"), 1).is_err());
    }

    #[test]
    fn type_a_graph_shape() {
        let p = weak_order_graph(&a(2, 2)).unwrap();
        assert_eq!(p.nodes.len(), 21);
        assert_eq!(p.maximal(), vec![p.index_of(&clan("1221")).unwrap()]);
        assert_eq!(p.closed().len(), 6);
        assert!(p.closed().iter().all(|&i| p.nodes[i].is_sign_only()));
    }

    #[test]
    fn full_order_small() {
        let p = orbit_poset(&a(1, 1)).unwrap();
        let top = p.index_of(&clan("11")).unwrap();
        assert!(p.full_leq(p.index_of(&clan("+-")).unwrap(), top));
        assert!(p.full_leq(p.index_of(&clan("-+")).unwrap(), top));
        let p = orbit_poset(&a(2, 2)).unwrap();
        assert!(p.full_leq(
            p.index_of(&clan("1212")).unwrap(),
            p.index_of(&clan("1221")).unwrap()
        ));
    }

    #[test]
    fn dot_marks_blue_edges() {
        let c = CaseId::new(CaseKind::CSpxSp, 2, 1).unwrap();
        let p = weak_order_graph(&c).unwrap();
        let dot = to_dot(&p);
        assert!(dot.contains("rank=same"));
        assert_eq!(
            dot.matches("color=blue").count(),
            p.edges.iter().filter(|e| e.degree == 2).count()
        );
    }
}
