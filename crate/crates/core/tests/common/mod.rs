//! Brute-force oracles shared by the integration tests. Everything here works
//! on plain indices and recomputes from definitions, without the library's
//! tree or rule machinery.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use domainlab::{Alt, Domain};
use itertools::Itertools;

pub type Ranking = Vec<usize>;

pub fn rankings(d: &Domain) -> Vec<Ranking> {
    d.prefs()
        .iter()
        .map(|p| p.ranking().iter().map(|a| a.index()).collect())
        .collect()
}

fn pos(r: &[usize], a: usize) -> usize {
    r.iter().position(|&x| x == a).unwrap()
}

pub fn prefers(r: &[usize], a: usize, b: usize) -> bool {
    pos(r, a) < pos(r, b)
}

// ---------------------------------------------------------------------------
// Trees

/// All-pairs distances by BFS.
pub fn distances(m: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); m];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    (0..m)
        .map(|s| {
            let mut dist = vec![usize::MAX; m];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &v in &adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        q.push_back(v);
                    }
                }
            }
            dist
        })
        .collect()
}

pub fn on_path(dist: &[Vec<usize>], u: usize, v: usize, w: usize) -> bool {
    dist[u][w] + dist[w][v] == dist[u][v]
}

pub fn path_set(dist: &[Vec<usize>], u: usize, v: usize) -> Vec<usize> {
    (0..dist.len()).filter(|&w| on_path(dist, u, v, w)).collect()
}

/// Closest vertex of `set` to `z`.
pub fn project(dist: &[Vec<usize>], z: usize, set: &[usize]) -> usize {
    *set.iter().min_by_key(|&&w| dist[z][w]).unwrap()
}

/// Every labelled tree on `m` vertices, decoded from Prüfer sequences.
pub fn all_trees(m: usize) -> Vec<Vec<(usize, usize)>> {
    if m == 2 {
        return vec![vec![(0, 1)]];
    }
    (0..m - 2)
        .map(|_| 0..m)
        .multi_cartesian_product()
        .map(|seq| {
            let mut degree = vec![1; m];
            for &s in &seq {
                degree[s] += 1;
            }
            let mut edges = Vec::new();
            for &s in &seq {
                let leaf = (0..m).find(|&v| degree[v] == 1).unwrap();
                edges.push((leaf.min(s), leaf.max(s)));
                degree[leaf] -= 1;
                degree[s] -= 1;
            }
            let rest: Vec<usize> = (0..m).filter(|&v| degree[v] == 1).collect();
            edges.push((rest[0], rest[1]));
            edges.sort();
            edges
        })
        .collect()
}

/// Every ranking closer to the peak along a path sits higher.
pub fn naive_sp(r: &[usize], dist: &[Vec<usize>]) -> bool {
    let top = r[0];
    let m = dist.len();
    (0..m).all(|z| (0..m).all(|w| w == z || !on_path(dist, top, z, w) || prefers(r, w, z)))
}

pub fn naive_ssp(r: &[usize], dist: &[Vec<usize>], threshold: usize) -> bool {
    let top = r[0];
    let path = path_set(dist, top, threshold);
    (0..dist.len()).all(|z| {
        if path.contains(&z) {
            path.iter()
                .all(|&w| w == z || !on_path(dist, top, z, w) || prefers(r, w, z))
        } else {
            prefers(r, project(dist, z, &path), z)
        }
    })
}

// ---------------------------------------------------------------------------
// Domains

pub fn naive_adjacency(rs: &[Ranking]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for p in rs {
        for q in rs {
            if p[0] == q[1] && p[1] == q[0] && p[2..] == q[2..] {
                out.insert((p[0].min(p[1]), p[0].max(p[1])));
            }
        }
    }
    out
}

pub fn connected(m: usize, edges: &BTreeSet<(usize, usize)>) -> bool {
    let e: Vec<_> = edges.iter().copied().collect();
    distances(m, &e)[0].iter().all(|&x| x != usize::MAX)
}

fn seconds(rs: &[Ranking], x: usize) -> BTreeSet<usize> {
    rs.iter().filter(|r| r[0] == x).map(|r| r[1]).collect()
}

/// Adjacency-graph leaves with several seconds, none of which (outside the
/// leaf's neighbour) has the leaf among its own seconds.
pub fn naive_leaf_symmetry_violations(rs: &[Ranking], m: usize) -> Vec<usize> {
    let adj = naive_adjacency(rs);
    (0..m)
        .filter(|&x| {
            let nbrs: Vec<usize> = adj
                .iter()
                .filter_map(|&(u, v)| (u == x).then_some(v).or((v == x).then_some(u)))
                .collect();
            let s = seconds(rs, x);
            nbrs.len() == 1 && s.len() > 1 && !s.iter().any(|&z| z != nbrs[0] && seconds(rs, z).contains(&x))
        })
        .collect()
}

/// Some tree on which every ranking is single-peaked.
pub fn naive_sp_domain(m: usize, rs: &[Ranking]) -> bool {
    connected(m, &naive_adjacency(rs))
        && all_trees(m).iter().any(|t| {
            let dist = distances(m, t);
            rs.iter().all(|r| naive_sp(r, &dist))
        })
}

pub fn naive_ssp_domain(m: usize, rs: &[Ranking]) -> bool {
    connected(m, &naive_adjacency(rs))
        && all_trees(m).iter().any(|t| {
            let dist = distances(m, t);
            (0..m).any(|x| rs.iter().all(|r| naive_ssp(r, &dist, x)))
        })
}

/// Oriented edges `(x, y)` satisfying the three critical-spot conditions.
pub fn naive_spots(rs: &[Ranking], m: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let dist = distances(m, edges);
    edges
        .iter()
        .flat_map(|&(u, v)| [(u, v), (v, u)])
        .filter(|&(x, y)| {
            let x_side: Vec<usize> = (0..m).filter(|&z| dist[z][x] < dist[z][y]).collect();
            let inside = |r: &Ranking| x_side.contains(&r[0]);
            let c1 = rs.iter().filter(|r| inside(r)).all(|r| naive_ssp(r, &dist, y));
            let c2 = rs
                .iter()
                .filter(|r| !inside(r))
                .all(|r| r.iter().find(|a| x_side.contains(a)) == Some(&x));
            let c3 = rs
                .iter()
                .filter(|r| !inside(r))
                .tuple_combinations()
                .any(|(p, q)| p[0] == q[0] && prefers(p, x, y) != prefers(q, x, y));
            c1 && c2 && c3
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Rules, as outcome vectors over profiles in lexicographic order (voter 0
// most significant)

pub fn profiles(k: usize, n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|_| 0..k).multi_cartesian_product().collect()
}

pub fn outcomes(k: usize, n: usize, f: impl Fn(&[usize]) -> usize) -> Vec<usize> {
    profiles(k, n).iter().map(|p| f(p)).collect()
}

fn index(p: &[usize], k: usize) -> usize {
    p.iter().fold(0, |acc, &q| acc * k + q)
}

pub fn naive_unanimous(rs: &[Ranking], n: usize, out: &[usize]) -> bool {
    profiles(rs.len(), n)
        .iter()
        .zip(out)
        .all(|(p, &o)| p.iter().any(|&q| rs[q][0] != rs[p[0]][0]) || o == rs[p[0]][0])
}

/// First manipulation in (voter, profile, deviation) order.
pub fn naive_sp_witness(rs: &[Ranking], n: usize, out: &[usize]) -> Option<(usize, Vec<usize>, usize)> {
    let k = rs.len();
    for v in 0..n {
        for p in profiles(k, n) {
            let o = out[index(&p, k)];
            for q in 0..k {
                let mut dev = p.clone();
                dev[v] = q;
                if prefers(&rs[p[v]], out[index(&dev, k)], o) {
                    return Some((v, p, q));
                }
            }
        }
    }
    None
}

pub fn naive_tops_only(rs: &[Ranking], n: usize, out: &[usize]) -> bool {
    let ps = profiles(rs.len(), n);
    let tops = |p: &Vec<usize>| p.iter().map(|&q| rs[q][0]).collect::<Vec<_>>();
    ps.iter()
        .zip(out)
        .tuple_combinations()
        .all(|((p, a), (q, b))| tops(p) != tops(q) || a == b)
}

pub fn naive_anonymous(k: usize, n: usize, out: &[usize]) -> bool {
    profiles(k, n).iter().all(|p| {
        (0..n)
            .permutations(n)
            .all(|perm| out[index(&perm.iter().map(|&i| p[i]).collect::<Vec<_>>(), k)] == out[index(p, k)])
    })
}

pub fn naive_dictator(rs: &[Ranking], n: usize, out: &[usize]) -> Option<usize> {
    let ps = profiles(rs.len(), n);
    (0..n).find(|&v| ps.iter().zip(out).all(|(p, &o)| o == rs[p[v]][0]))
}

/// Every unanimous strategy-proof two-voter rule that depends only on peaks,
/// by trying all tables over the domain's peak pairs.
pub fn brute_topsonly_sp(rs: &[Ranking], m: usize) -> BTreeSet<Vec<usize>> {
    let peaks: BTreeSet<usize> = rs.iter().map(|r| r[0]).collect();
    let cells: Vec<(usize, usize)> = peaks.iter().copied().cartesian_product(peaks.iter().copied()).collect();
    let free: Vec<usize> = (0..cells.len()).filter(|&c| cells[c].0 != cells[c].1).collect();
    let mut found = BTreeSet::new();
    for values in free.iter().map(|_| 0..m).multi_cartesian_product() {
        let mut table = vec![usize::MAX; m * m];
        for &(p, q) in &cells {
            if p == q {
                table[p * m + q] = p;
            }
        }
        for (&c, &v) in free.iter().zip(&values) {
            table[cells[c].0 * m + cells[c].1] = v;
        }
        let out = outcomes(rs.len(), 2, |p| table[rs[p[0]][0] * m + rs[p[1]][0]]);
        if naive_sp_witness(rs, 2, &out).is_none() {
            found.insert(out);
        }
    }
    found
}

/// Every unanimous strategy-proof rule, tops-only or not.
pub fn brute_all_sp(rs: &[Ranking], m: usize, n: usize) -> BTreeSet<Vec<usize>> {
    let ps = profiles(rs.len(), n);
    let choices: Vec<Vec<usize>> = ps
        .iter()
        .map(|p| {
            let top = rs[p[0]][0];
            if p.iter().all(|&q| rs[q][0] == top) {
                vec![top]
            } else {
                (0..m).collect()
            }
        })
        .collect();
    choices
        .into_iter()
        .multi_cartesian_product()
        .filter(|out| naive_sp_witness(rs, n, out).is_none())
        .collect()
}

/// The PNT rule on a tree with voters 0 and 1 in the distinguished roles.
pub fn pnt_outcomes(rs: &[Ranking], dist: &[Vec<usize>], x: usize, y: usize, n: usize) -> Vec<usize> {
    let m = dist.len();
    let x_side: Vec<usize> = (0..m).filter(|&z| dist[z][x] < dist[z][y]).collect();
    outcomes(rs.len(), n, |p| {
        let (pi, pj) = (&rs[p[0]], &rs[p[1]]);
        if !x_side.contains(&pi[0]) {
            return pi[0];
        }
        if !x_side.contains(&pj[0]) {
            return if prefers(pj, x, y) { x } else { y };
        }
        let peaks: Vec<usize> = p.iter().map(|&q| rs[q][0]).collect();
        let span: Vec<usize> = (0..m)
            .filter(|&w| {
                peaks
                    .iter()
                    .cartesian_product(&peaks)
                    .any(|(&a, &b)| on_path(dist, a, b, w))
            })
            .collect();
        project(dist, x, &span)
    })
}

// ---------------------------------------------------------------------------
// Example rules

/// The two-triangle rule: voter 0 dictates on {a,b,c} whenever voter 1 peaks
/// there, otherwise voter 1's peak.
pub fn two_triangle_rule(d: &Domain) -> impl Fn(&[usize]) -> Alt + Sync + '_ {
    let block: Vec<Alt> = ["a", "b", "c"].iter().map(|l| d.alt(l).unwrap()).collect();
    move |p: &[usize]| {
        let (pi, pj) = (d.pref(p[0]), d.pref(p[1]));
        if block.contains(&pj.top()) {
            *pi.ranking().iter().find(|a| block.contains(a)).unwrap()
        } else {
            pj.top()
        }
    }
}

/// The star rule on the nine-preference domain: three exceptional pairings,
/// otherwise the projection of b onto the path between the peaks.
pub fn star_rule(d: &Domain) -> impl Fn(&[usize]) -> Alt + Sync + '_ {
    let l = |s: &str| d.alt(s).unwrap();
    let (a, b, c, dd) = (l("a"), l("b"), l("c"), l("d"));
    // star centred at b
    let edges = [(a.index(), b.index()), (b.index(), c.index()), (b.index(), dd.index())];
    let dist = distances(d.m(), &edges);
    let peak = move |i: usize| d.pref(i).top();
    move |p: &[usize]| {
        let (i, j) = (p[0], p[1]);
        let pairs = |special: usize, x: Alt| (i == special && peak(j) == x) || (peak(i) == x && j == special);
        if pairs(6, dd) {
            dd
        } else if pairs(7, a) {
            a
        } else if pairs(8, c) {
            c
        } else {
            let path = path_set(&dist, peak(i).index(), peak(j).index());
            Alt::from_index(project(&dist, b.index(), &path))
        }
    }
}
