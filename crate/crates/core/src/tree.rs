//! Undirected graphs and trees over alternatives.
//!
//! A [`Tree`] precomputes all-pairs distances, next hops and path vertex sets,
//! so `path`, `project` and `side_set` are cheap. Trees are small (at most 64
//! vertices, and the enumeration-backed searches stay at or below 8).

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::altset::AltSet;
use crate::pref::{Alt, MAX_ALTERNATIVES};

/// Default cap on `m` for labeled-tree enumeration (8^6 = 262,144 trees).
pub const DEFAULT_TREE_CAP: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("graph is not a tree")]
    NotATree,
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex set is not path-closed in the tree")]
    NotPathClosed,
    #[error("the two vertices must be distinct")]
    SameVertex,
    #[error("({0}, {1}) are not dual-thresholds")]
    NotDualThresholds(u8, u8),
    #[error("({0}, {1}) is not an edge of the tree")]
    NotAnEdge(u8, u8),
    #[error("tree enumeration for m = {m} exceeds the cap {cap}")]
    EnumerationCap { m: usize, cap: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Simple undirected graph on `0..m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    m: usize,
    adj: Vec<AltSet>,
}

impl Graph {
    pub fn empty(m: usize) -> Self {
        Graph {
            m,
            adj: vec![AltSet::EMPTY; m],
        }
    }

    /// Self-loops are ignored.
    pub fn from_edges(m: usize, edges: impl IntoIterator<Item = (Alt, Alt)>) -> Self {
        let mut g = Graph::empty(m);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn complete(m: usize) -> Self {
        let mut g = Graph::empty(m);
        for a in 0..m {
            g.adj[a] = AltSet::full(m).without(Alt::from_index(a));
        }
        g
    }

    pub fn add_edge(&mut self, a: Alt, b: Alt) {
        if a != b {
            self.adj[a.index()].insert(b);
            self.adj[b.index()].insert(a);
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn has_edge(&self, a: Alt, b: Alt) -> bool {
        self.adj[a.index()].contains(b)
    }

    pub fn neighbors(&self, a: Alt) -> AltSet {
        self.adj[a.index()]
    }

    pub fn degree(&self, a: Alt) -> usize {
        self.adj[a.index()].len()
    }

    /// Canonical edge list: `(low, high)` pairs in lexicographic order.
    pub fn edges(&self) -> Vec<(Alt, Alt)> {
        let mut out = Vec::new();
        for a in 0..self.m {
            for b in self.adj[a].iter() {
                if a < b.index() {
                    out.push((Alt::from_index(a), b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// Vertices of degree exactly one.
    pub fn leaves(&self) -> AltSet {
        (0..self.m)
            .map(Alt::from_index)
            .filter(|&a| self.degree(a) == 1)
            .collect()
    }

    /// Vertices reachable from `start` without leaving `within`.
    pub fn component(&self, start: Alt, within: AltSet) -> AltSet {
        let mut seen = AltSet::single(start);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for v in self.adj[u.index()].intersection(within).iter() {
                if !seen.contains(v) {
                    seen.insert(v);
                    stack.push(v);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.m <= 1 || self.component(Alt(0), AltSet::full(self.m)) == AltSet::full(self.m)
    }

    pub fn is_tree(&self) -> bool {
        self.m >= 1 && self.edge_count() == self.m - 1 && self.is_connected()
    }

    /// Induced subgraph on `set` (vertex ids unchanged).
    pub fn induced(&self, set: AltSet) -> Graph {
        let mut g = Graph::empty(self.m);
        for a in set.iter() {
            g.adj[a.index()] = self.adj[a.index()].intersection(set);
        }
        g
    }

    /// Edge subset test.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.m == other.m && self.adj.iter().zip(&other.adj).all(|(a, b)| a.is_subset(*b))
    }

    /// DOT text: one line per vertex in id order, then canonical edges.
    pub fn to_dot(&self, labels: &[String]) -> String {
        let mut out = String::from("graph G {\n");
        for l in labels.iter().take(self.m) {
            out.push_str(&format!("  \"{}\";\n", escape_dot(l)));
        }
        for (a, b) in self.edges() {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\";\n",
                escape_dot(&labels[a.index()]),
                escape_dot(&labels[b.index()])
            ));
        }
        out.push_str("}\n");
        out
    }

    /// Line-based graph file text (see [`parse_graph`]).
    pub fn to_text(&self, labels: &[String]) -> String {
        let mut out = format!("alternatives: {}\n", labels.join(" "));
        for (a, b) in self.edges() {
            out.push_str(&format!("edge: {} {}\n", labels[a.index()], labels[b.index()]));
        }
        out
    }
}

fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Parses a graph file: optional `alternatives:` line, then `edge: u v` lines.
///
/// With `known` labels the edges are resolved against them; otherwise the
/// `alternatives:` line (or first appearance order) defines the ids.
pub fn parse_graph(text: &str, known: Option<&[String]>) -> Result<(Vec<String>, Graph), TreeError> {
    let mut declared: Option<Vec<String>> = None;
    let mut raw_edges: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(rest) = t.strip_prefix("alternatives:") {
            declared = Some(rest.split_whitespace().map(str::to_string).collect());
        } else if let Some(rest) = t.strip_prefix("edge:") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(TreeError::Parse {
                    line,
                    msg: "an edge needs exactly two labels".into(),
                });
            }
            if toks[0] == toks[1] {
                return Err(TreeError::Parse {
                    line,
                    msg: "self-loop".into(),
                });
            }
            raw_edges.push((line, toks[0].to_string(), toks[1].to_string()));
        } else {
            return Err(TreeError::Parse {
                line,
                msg: format!("unrecognised directive `{t}`"),
            });
        }
    }
    let labels: Vec<String> = match (known, declared) {
        (Some(k), Some(d)) => {
            let ks: HashSet<&String> = k.iter().collect();
            let ds: HashSet<&String> = d.iter().collect();
            if ks != ds {
                return Err(TreeError::Parse {
                    line: 0,
                    msg: "declared alternatives differ from the domain's".into(),
                });
            }
            k.to_vec()
        }
        (Some(k), None) => k.to_vec(),
        (None, Some(d)) => d,
        (None, None) => {
            let mut seen = Vec::new();
            for (_, a, b) in &raw_edges {
                for l in [a, b] {
                    if !seen.contains(l) {
                        seen.push(l.clone());
                    }
                }
            }
            seen
        }
    };
    if labels.is_empty() {
        return Err(TreeError::Parse {
            line: 0,
            msg: "no alternatives".into(),
        });
    }
    if labels.len() > MAX_ALTERNATIVES {
        return Err(TreeError::Parse {
            line: 0,
            msg: "too many alternatives".into(),
        });
    }
    let lookup: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    if lookup.len() != labels.len() {
        return Err(TreeError::Parse {
            line: 0,
            msg: "duplicate alternative label".into(),
        });
    }
    let mut g = Graph::empty(labels.len());
    for (line, a, b) in &raw_edges {
        let get = |l: &str| {
            lookup.get(l).copied().ok_or_else(|| TreeError::Parse {
                line: *line,
                msg: format!("unknown alternative `{l}`"),
            })
        };
        g.add_edge(Alt::from_index(get(a)?), Alt::from_index(get(b)?));
    }
    Ok((labels, g))
}

/// A tree with all-pairs path data.
#[derive(Clone, Debug)]
pub struct Tree {
    graph: Graph,
    dist: Vec<Vec<u8>>,
    // next[x][y]: neighbour of x on the path to y (x itself when x == y)
    next: Vec<Vec<Alt>>,
    between: Vec<Vec<AltSet>>,
}

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
    }
}

impl Eq for Tree {}

impl std::hash::Hash for Tree {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.graph.hash(state)
    }
}

impl Tree {
    pub fn new(graph: Graph) -> Result<Self, TreeError> {
        if !graph.is_tree() {
            return Err(TreeError::NotATree);
        }
        let m = graph.m();
        let mut dist = vec![vec![u8::MAX; m]; m];
        let mut next = vec![vec![Alt(0); m]; m];
        for y in 0..m {
            // BFS from y; parent pointers give the next hop towards y.
            let mut q = VecDeque::from([Alt::from_index(y)]);
            dist[y][y] = 0;
            next[y][y] = Alt::from_index(y);
            while let Some(u) = q.pop_front() {
                for v in graph.neighbors(u).iter() {
                    if dist[v.index()][y] == u8::MAX {
                        dist[v.index()][y] = dist[u.index()][y] + 1;
                        next[v.index()][y] = u;
                        q.push_back(v);
                    }
                }
            }
        }
        let mut between = vec![vec![AltSet::EMPTY; m]; m];
        for (x, row) in between.iter_mut().enumerate() {
            for (y, slot) in row.iter_mut().enumerate() {
                let mut s = AltSet::single(Alt::from_index(x));
                let mut cur = Alt::from_index(x);
                while cur.index() != y {
                    cur = next[cur.index()][y];
                    s.insert(cur);
                }
                *slot = s;
            }
        }
        Ok(Tree {
            graph,
            dist,
            next,
            between,
        })
    }

    pub fn from_edges(m: usize, edges: &[(usize, usize)]) -> Result<Self, TreeError> {
        Tree::new(Graph::from_edges(
            m,
            edges.iter().map(|&(a, b)| (Alt::from_index(a), Alt::from_index(b))),
        ))
    }

    /// The line visiting `order` in sequence.
    pub fn line(order: &[Alt]) -> Result<Self, TreeError> {
        let m = order.len();
        Tree::new(Graph::from_edges(m, order.windows(2).map(|w| (w[0], w[1]))))
    }

    /// The line `0 - 1 - ... - (m-1)`.
    pub fn standard_line(m: usize) -> Self {
        let order: Vec<Alt> = (0..m).map(Alt::from_index).collect();
        Tree::line(&order).expect("a line is a tree")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn m(&self) -> usize {
        self.graph.m()
    }

    pub fn edges(&self) -> Vec<(Alt, Alt)> {
        self.graph.edges()
    }

    pub fn distance(&self, x: Alt, y: Alt) -> usize {
        self.dist[x.index()][y.index()] as usize
    }

    /// Neighbour of `x` on the path to `y`; `x` when they coincide.
    pub fn next_hop(&self, x: Alt, y: Alt) -> Alt {
        self.next[x.index()][y.index()]
    }

    /// The unique path from `x` to `y`, both included.
    pub fn path(&self, x: Alt, y: Alt) -> Vec<Alt> {
        let mut out = vec![x];
        let mut cur = x;
        while cur != y {
            cur = self.next_hop(cur, y);
            out.push(cur);
        }
        out
    }

    /// Vertex set of the path from `x` to `y`.
    #[inline]
    pub fn interval(&self, x: Alt, y: Alt) -> AltSet {
        self.between[x.index()][y.index()]
    }

    /// Every path between members of `set` stays inside `set`.
    pub fn is_path_closed(&self, set: AltSet) -> bool {
        // Connected in the induced forest is equivalent for trees.
        match set.first() {
            None => true,
            Some(a) => self.graph.component(a, set) == set,
        }
    }

    /// Projection of `a` on the subtree spanned by the path-closed `set`.
    pub fn project(&self, a: Alt, set: AltSet) -> Result<Alt, TreeError> {
        if set.is_empty() {
            return Err(TreeError::EmptySet);
        }
        if !self.is_path_closed(set) {
            return Err(TreeError::NotPathClosed);
        }
        Ok(self.project_unchecked(a, set))
    }

    /// As [`Tree::project`] without validating `set`.
    #[inline]
    pub fn project_unchecked(&self, a: Alt, set: AltSet) -> Alt {
        if set.contains(a) {
            return a;
        }
        let row = &self.dist[a.index()];
        set.iter().min_by_key(|b| row[b.index()]).expect("non-empty set")
    }

    /// Minimal subtree covering the given peaks (the set Γ).
    pub fn minimal_subtree(&self, peaks: &[Alt]) -> AltSet {
        let Some(&first) = peaks.first() else {
            return AltSet::EMPTY;
        };
        peaks
            .iter()
            .fold(AltSet::single(first), |acc, &p| acc.union(self.interval(first, p)))
    }

    /// `{ z : x lies on the path from z to y }`.
    pub fn side_set(&self, x: Alt, y: Alt) -> Result<AltSet, TreeError> {
        if x == y {
            return Err(TreeError::SameVertex);
        }
        Ok(self.side_set_unchecked(x, y))
    }

    #[inline]
    pub fn side_set_unchecked(&self, x: Alt, y: Alt) -> AltSet {
        (0..self.m())
            .map(Alt::from_index)
            .filter(|&z| self.interval(z, y).contains(x))
            .collect()
    }

    /// Every vertex off the path from `a` to `b` projects onto `a` or `b`.
    pub fn is_dual_thresholds(&self, a: Alt, b: Alt) -> Result<bool, TreeError> {
        if a == b {
            return Err(TreeError::SameVertex);
        }
        Ok(self.dual_thresholds_unchecked(a, b))
    }

    pub fn dual_thresholds_unchecked(&self, a: Alt, b: Alt) -> bool {
        let zone = self.interval(a, b);
        (0..self.m()).map(Alt::from_index).all(|c| {
            zone.contains(c) || {
                let p = self.project_unchecked(c, zone);
                p == a || p == b
            }
        })
    }

    pub fn leaves(&self) -> AltSet {
        self.graph.leaves()
    }

    pub fn to_dot(&self, labels: &[String]) -> String {
        self.graph.to_dot(labels)
    }

    pub fn to_graph_text(&self, labels: &[String]) -> String {
        self.graph.to_text(labels)
    }
}

/// Number of labeled trees on `m` vertices (Cayley).
pub fn tree_count(m: usize) -> u64 {
    match m {
        0 => 0,
        1 | 2 => 1,
        _ => (m as u64).pow(m as u32 - 2),
    }
}

/// Decodes the `index`th Prüfer sequence (base-`m` digits, most significant
/// first) into its tree.
pub fn tree_from_prufer_index(m: usize, index: u64) -> Tree {
    assert!(m >= 2);
    let len = m - 2;
    let mut seq = vec![0usize; len];
    let mut rest = index;
    for slot in seq.iter_mut().rev() {
        *slot = (rest % m as u64) as usize;
        rest /= m as u64;
    }
    tree_from_prufer(m, &seq)
}

/// Standard Prüfer decoding.
pub fn tree_from_prufer(m: usize, seq: &[usize]) -> Tree {
    debug_assert_eq!(seq.len() + 2, m);
    let mut degree = vec![1usize; m];
    for &s in seq {
        degree[s] += 1;
    }
    let mut g = Graph::empty(m);
    for &s in seq {
        let leaf = (0..m).find(|&v| degree[v] == 1).expect("a leaf exists");
        g.add_edge(Alt::from_index(leaf), Alt::from_index(s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..m).filter(|&v| degree[v] == 1).collect();
    g.add_edge(Alt::from_index(rest[0]), Alt::from_index(rest[1]));
    Tree::new(g).expect("Prüfer decoding yields a tree")
}

/// All labeled trees on `m` vertices in Prüfer order.
pub fn enumerate_trees(m: usize, cap: usize) -> Result<impl Iterator<Item = Tree>, TreeError> {
    if m < 2 || m > cap {
        return Err(TreeError::EnumerationCap { m, cap });
    }
    Ok((0..tree_count(m)).map(move |i| tree_from_prufer_index(m, i)))
}

/// Canonical edge set, handy for set comparisons in tests and reports.
pub fn edge_set(g: &Graph) -> BTreeSet<(Alt, Alt)> {
    g.edges().into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ids(t: &[usize]) -> Vec<Alt> {
        t.iter().map(|&i| Alt::from_index(i)).collect()
    }

    #[test]
    fn paths_on_fixtures() {
        let l6 = Tree::standard_line(6);
        assert_eq!(l6.path(Alt(1), Alt(4)), ids(&[1, 2, 3, 4]));
        assert_eq!(l6.path(Alt(3), Alt(3)), ids(&[3]));
        let (labels, star) = fixtures::star4();
        let a = |l: &str| Alt::from_index(labels.iter().position(|x| x == l).unwrap());
        assert_eq!(star.path(a("a"), a("d")), vec![a("a"), a("b"), a("d")]);
    }

    #[test]
    fn projections() {
        let l6 = Tree::standard_line(6);
        let b: AltSet = ids(&[2, 3, 4]).into_iter().collect();
        assert_eq!(l6.project(Alt(0), b), Ok(Alt(2)));
        assert_eq!(l6.project(Alt(3), b), Ok(Alt(3)));
        let gap: AltSet = ids(&[1, 3]).into_iter().collect();
        assert_eq!(l6.project(Alt(0), gap), Err(TreeError::NotPathClosed));
        assert_eq!(l6.project(Alt(0), AltSet::EMPTY), Err(TreeError::EmptySet));
        let (labels, star) = fixtures::star4();
        let a = |l: &str| Alt::from_index(labels.iter().position(|x| x == l).unwrap());
        let ab: AltSet = [a("a"), a("b")].into_iter().collect();
        assert_eq!(star.project(a("c"), ab), Ok(a("b")));
    }

    #[test]
    fn minimal_subtrees() {
        let l6 = Tree::standard_line(6);
        assert_eq!(l6.minimal_subtree(&ids(&[0, 5])), AltSet::full(6));
        assert_eq!(l6.minimal_subtree(&ids(&[2])), AltSet::single(Alt(2)));
        let (labels, star) = fixtures::star4();
        let a = |l: &str| Alt::from_index(labels.iter().position(|x| x == l).unwrap());
        assert_eq!(star.minimal_subtree(&[a("a"), a("c"), a("d")]), AltSet::full(4));
    }

    #[test]
    fn side_sets() {
        let l6 = Tree::standard_line(6);
        assert_eq!(l6.side_set(Alt(1), Alt(4)), Ok(ids(&[0, 1]).into_iter().collect()));
        assert_eq!(l6.side_set(Alt(0), Alt(1)), Ok(AltSet::single(Alt(0))));
        assert_eq!(l6.side_set(Alt(1), Alt(1)), Err(TreeError::SameVertex));
    }

    #[test]
    fn spine_structure() {
        let (labels, t) = fixtures::spine25();
        let a = |l: &str| Alt::from_index(labels.iter().position(|x| x == l).unwrap());
        // a's side: the component of a once the edge a-b is removed.
        let mut cut = t.graph().clone();
        cut.adj[a("a").index()].remove(a("b"));
        cut.adj[a("b").index()].remove(a("a"));
        let comp = cut.component(a("a"), AltSet::full(t.m()));
        assert_eq!(t.side_set(a("a"), a("b")).unwrap(), comp);
        assert!(comp.contains(a("c5")) && comp.contains(a("u3")) && !comp.contains(a("y")));
        assert_eq!(t.is_dual_thresholds(a("x"), a("y")), Ok(false));
        assert_eq!(t.is_dual_thresholds(a("a"), a("b")), Ok(true));
        assert_eq!(t.is_dual_thresholds(a("a"), a("y")), Ok(true));
        // x is a leaf of its side subtree, y is not.
        let xs = t.side_set(a("x"), a("y")).unwrap();
        let ys = t.side_set(a("y"), a("x")).unwrap();
        assert_eq!(t.graph().induced(xs).degree(a("x")), 1);
        assert!(t.graph().induced(ys).degree(a("y")) > 1);
    }

    #[test]
    fn dual_thresholds_basics() {
        let l6 = Tree::standard_line(6);
        assert_eq!(l6.is_dual_thresholds(Alt(0), Alt(5)), Ok(true));
        for (a, b) in l6.edges() {
            assert_eq!(l6.is_dual_thresholds(a, b), Ok(true));
        }
        assert_eq!(l6.is_dual_thresholds(Alt(2), Alt(2)), Err(TreeError::SameVertex));
    }

    #[test]
    fn leaves_of_fixtures() {
        let (labels, g) = fixtures::d1_adjacency();
        let names: Vec<&str> = g.leaves().iter().map(|a| labels[a.index()].as_str()).collect();
        assert_eq!(names, vec!["a1", "a3", "a6"]);
        let mut cycle = Graph::empty(4);
        for i in 0..4 {
            cycle.add_edge(Alt::from_index(i), Alt::from_index((i + 1) % 4));
        }
        assert!(cycle.leaves().is_empty());
        let (labels, star) = fixtures::star4();
        let names: Vec<&str> = star.leaves().iter().map(|a| labels[a.index()].as_str()).collect();
        assert_eq!(names, vec!["a", "c", "d"]);
    }

    #[test]
    fn tree_counts() {
        for (m, n) in [(2, 1), (3, 3), (4, 16), (5, 125)] {
            let trees: Vec<Tree> = enumerate_trees(m, DEFAULT_TREE_CAP).unwrap().collect();
            assert_eq!(trees.len(), n);
            let distinct: HashSet<Vec<(Alt, Alt)>> = trees.iter().map(|t| t.edges()).collect();
            assert_eq!(distinct.len(), n);
        }
        assert!(matches!(
            enumerate_trees(9, DEFAULT_TREE_CAP),
            Err(TreeError::EnumerationCap { m: 9, cap: 8 })
        ));
    }

    #[test]
    fn dot_is_canonical() {
        let (labels, g) = fixtures::d1_adjacency();
        let dot = g.to_dot(&labels);
        assert_eq!(
            dot,
            "graph G {\n  \"a1\";\n  \"a2\";\n  \"a3\";\n  \"a4\";\n  \"a5\";\n  \"a6\";\n  \"a1\" -- \"a2\";\n  \"a2\" -- \"a4\";\n  \"a3\" -- \"a4\";\n  \"a4\" -- \"a5\";\n  \"a5\" -- \"a6\";\n}\n"
        );
    }

    #[test]
    fn graph_file_round_trip() {
        let (labels, g) = fixtures::d1_adjacency();
        let text = g.to_graph_text(&labels);
        let (l2, g2) = parse_graph(&text, None).unwrap();
        assert_eq!((l2, g2), (labels.clone(), g.graph().clone()));
        assert!(matches!(
            parse_graph("edge: a1 zz\n", Some(&labels)),
            Err(TreeError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("edge: a1 a1\n", None),
            Err(TreeError::Parse { line: 1, .. })
        ));
    }
}
