//! Adjacency graphs of a domain and the richness conditions built on them.

use std::collections::HashMap;

use serde::Serialize;

use crate::altset::AltSet;
use crate::pref::{Alt, Domain};
use crate::tree::Graph;

/// `a ~ b`: two preferences swap `a` and `b` at the top and agree below.
pub fn adjacency_graph(d: &Domain) -> Graph {
    swap_graph(d, true)
}

/// As [`adjacency_graph`] without the agreement requirement below rank 2.
pub fn weak_adjacency_graph(d: &Domain) -> Graph {
    swap_graph(d, false)
}

fn swap_graph(d: &Domain, tails: bool) -> Graph {
    let mut g = Graph::empty(d.m());
    if d.m() < 2 {
        return g;
    }
    // bit 0: seen with the lower id on top, bit 1: with the higher id on top
    let mut seen: HashMap<(Alt, Alt, &[Alt]), u8> = HashMap::new();
    for p in d.prefs() {
        let (t, s) = (p.top(), p.second().expect("m >= 2"));
        let key = (t.min(s), t.max(s), if tails { &p.ranking()[2..] } else { &[][..] });
        let bit = if t < s { 1 } else { 2 };
        let e = seen.entry(key).or_insert(0);
        *e |= bit;
        if *e == 3 {
            g.add_edge(t, s);
        }
    }
    g
}

pub fn check_path_connected(d: &Domain) -> bool {
    adjacency_graph(d).is_connected()
}

/// First completely reversed pair `(i, j)`, `i < j`, in lexicographic order.
pub fn check_diversity(d: &Domain) -> Option<(usize, usize)> {
    let index: HashMap<&[Alt], usize> = d.prefs().iter().enumerate().map(|(i, p)| (p.ranking(), i)).collect();
    d.prefs().iter().enumerate().find_map(|(i, p)| {
        let r = p.reversed();
        match index.get(r.ranking()) {
            Some(&j) if j > i => Some((i, j)),
            _ => None,
        }
    })
}

/// All completely reversed pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn reversed_pairs(d: &Domain) -> Vec<(usize, usize)> {
    let index: HashMap<&[Alt], usize> = d.prefs().iter().enumerate().map(|(i, p)| (p.ranking(), i)).collect();
    d.prefs()
        .iter()
        .enumerate()
        .filter_map(|(i, p)| match index.get(p.reversed().ranking()) {
            Some(&j) if j > i => Some((i, j)),
            _ => None,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafCheck {
    pub leaf: Alt,
    /// The seconds set of the leaf's preferences.
    pub seconds: AltSet,
    /// Whether the condition applies (more than one second).
    pub applies: bool,
    /// Smallest qualifying `z`, if any.
    pub witness: Option<Alt>,
}

impl LeafCheck {
    pub fn ok(&self) -> bool {
        !self.applies || self.witness.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafSymmetry {
    pub holds: bool,
    pub leaves: Vec<LeafCheck>,
}

impl LeafSymmetry {
    /// Leaves where the condition fails.
    pub fn violations(&self) -> Vec<Alt> {
        self.leaves.iter().filter(|l| !l.ok()).map(|l| l.leaf).collect()
    }
}

pub fn check_leaf_symmetry(d: &Domain) -> LeafSymmetry {
    leaf_symmetry_on(d, &adjacency_graph(d))
}

fn leaf_symmetry_on(d: &Domain, g: &Graph) -> LeafSymmetry {
    let leaves: Vec<LeafCheck> = g
        .leaves()
        .iter()
        .map(|x| {
            let seconds = d.seconds_set(x);
            let applies = seconds.len() > 1;
            let witness = seconds
                .difference(g.neighbors(x))
                .iter()
                .find(|&z| d.seconds_set(z).contains(x));
            LeafCheck {
                leaf: x,
                seconds,
                applies,
                witness: if applies { witness } else { None },
            }
        })
        .collect();
    LeafSymmetry {
        holds: leaves.iter().all(LeafCheck::ok),
        leaves,
    }
}

/// First `x` (by id) whose preferences all share one second-ranked `y`.
pub fn unique_seconds(d: &Domain) -> Option<(Alt, Alt)> {
    d.alternatives().find_map(|x| {
        let s = d.seconds_set(x);
        (s.len() == 1).then(|| (x, s.first().expect("singleton")))
    })
}

/// Relabeling `a1..am` with `a1 ≁ a2` and each later `ak` weakly adjacent to
/// two earlier ones. Growing the ordered prefix never hurts, so a greedy
/// closure from each starting edge decides the question exactly.
pub fn linked_order(d: &Domain) -> Option<Vec<Alt>> {
    let g = weak_adjacency_graph(d);
    let m = d.m();
    if m < 2 {
        return None;
    }
    for (a, b) in g.edges() {
        let mut order = vec![a, b];
        let mut placed = AltSet::single(a).with(b);
        loop {
            let next = (0..m)
                .map(Alt::from_index)
                .find(|&c| !placed.contains(c) && g.neighbors(c).intersection(placed).len() >= 2);
            match next {
                Some(c) => {
                    order.push(c);
                    placed.insert(c);
                }
                None => break,
            }
        }
        if order.len() == m {
            return Some(order);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RichnessReport {
    pub minimally_rich: bool,
    pub path_connected: bool,
    pub diversity_witness: Option<(usize, usize)>,
    pub leaf_symmetry: LeafSymmetry,
    pub unique_seconds_witness: Option<(Alt, Alt)>,
    pub linked: bool,
    pub unidimensional: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at least three alternatives are required (got {0})")]
pub struct TooFewAlternatives(pub usize);

pub fn check_unidimensional(d: &Domain) -> Result<RichnessReport, TooFewAlternatives> {
    if d.m() < 3 {
        return Err(TooFewAlternatives(d.m()));
    }
    let g = adjacency_graph(d);
    let path_connected = g.is_connected();
    let diversity_witness = check_diversity(d);
    let leaf_symmetry = leaf_symmetry_on(d, &g);
    let unidimensional = path_connected && diversity_witness.is_some() && leaf_symmetry.holds;
    Ok(RichnessReport {
        minimally_rich: d.is_minimally_rich(),
        path_connected,
        diversity_witness,
        leaf_symmetry,
        unique_seconds_witness: unique_seconds(d),
        linked: linked_order(d).is_some(),
        unidimensional,
    })
}
