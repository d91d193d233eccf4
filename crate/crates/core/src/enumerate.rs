//! Exhaustive enumeration of strategy-proof rules on small domains.

use rayon::prelude::*;
use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::pref::{Alt, Domain};
use crate::rules::{
    decode, make_dictatorship, make_hybrid_relaxed, make_peak_table, make_projection, profile_count, OutcomeTable,
    RuleError, Scf, ScfBody, MAX_FULL_TABLE,
};
use crate::structure::adjacency_graph;
use crate::tree::{enumerate_trees, Graph, Tree, TreeError, DEFAULT_TREE_CAP};

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("domain has {m} alternatives and {prefs} preferences; limits are {max_m} and {max_prefs}")]
    TooLarge {
        m: usize,
        prefs: usize,
        max_m: usize,
        max_prefs: usize,
    },
    #[error("{0} profiles exceed the micro enumeration limit")]
    TooManyProfiles(u64),
    #[error("decomposition needs a two-voter peak table")]
    NotPeakTable,
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumLimits {
    pub max_m: usize,
    pub max_prefs: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits {
            max_m: 6,
            max_prefs: 60,
        }
    }
}

/// Micro enumeration profile limit.
pub const MAX_MICRO_PROFILES: u64 = 100_000;

// Search nodes are charged to the shared budget in batches of this size.
const CHARGE_BATCH: u64 = 4096;
// Prefixes are expanded until the frontier reaches this size.
const SPLIT_FRONTIER: usize = 256;

/// Backtracking over `order`, trying `values` in sequence; `ok` checks a
/// candidate value against the variables already assigned.
struct Search<'a, F> {
    order: &'a [usize],
    values: &'a [Alt],
    ok: F,
    budget: &'a Budget,
}

type Assignment = Vec<Option<Alt>>;

impl<F> Search<'_, F>
where
    F: Fn(&Assignment, usize, Alt) -> bool + Sync,
{
    fn run(&self, start: Assignment) -> Result<Vec<Assignment>, BudgetExceeded> {
        let mut frontier = vec![start];
        let mut depth = 0;
        let mut nodes = 0u64;
        while depth < self.order.len() && frontier.len() < SPLIT_FRONTIER && !frontier.is_empty() {
            let var = self.order[depth];
            let mut next = Vec::new();
            for a in frontier {
                for &v in self.values {
                    nodes += 1;
                    if (self.ok)(&a, var, v) {
                        let mut b = a.clone();
                        b[var] = Some(v);
                        next.push(b);
                    }
                }
            }
            frontier = next;
            depth += 1;
        }
        self.budget.charge(nodes)?;
        let parts = frontier
            .into_par_iter()
            .map(|a| self.dfs(a, depth))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(parts.into_iter().flatten().collect())
    }

    fn dfs(&self, mut a: Assignment, start: usize) -> Result<Vec<Assignment>, BudgetExceeded> {
        let len = self.order.len();
        let mut out = Vec::new();
        if start == len {
            out.push(a);
            return Ok(out);
        }
        let mut next = vec![0usize; len + 1];
        let mut depth = start;
        let mut nodes = 0u64;
        loop {
            let var = self.order[depth];
            a[var] = None;
            let mut placed = false;
            while next[depth] < self.values.len() {
                let v = self.values[next[depth]];
                next[depth] += 1;
                nodes += 1;
                if nodes == CHARGE_BATCH {
                    self.budget.charge(nodes)?;
                    nodes = 0;
                }
                if (self.ok)(&a, var, v) {
                    a[var] = Some(v);
                    placed = true;
                    break;
                }
            }
            if placed {
                if depth + 1 == len {
                    out.push(a.clone());
                } else {
                    depth += 1;
                    next[depth] = 0;
                }
                continue;
            }
            if depth == start {
                break;
            }
            depth -= 1;
        }
        self.budget.charge(nodes)?;
        Ok(out)
    }
}

/// Breadth-first distances in `g`; unreachable pairs get `usize::MAX`.
fn distances(g: &Graph, m: usize) -> Vec<Vec<usize>> {
    (0..m)
        .map(|s| {
            let mut dist = vec![usize::MAX; m];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([Alt::from_index(s)]);
            while let Some(u) = queue.pop_front() {
                for w in g.neighbors(u).iter() {
                    if dist[w.index()] == usize::MAX {
                        dist[w.index()] = dist[u.index()] + 1;
                        queue.push_back(w);
                    }
                }
            }
            dist
        })
        .collect()
}

/// `weak[p][u * m + v]`: every preference peaked at `p` weakly prefers `u` to `v`.
fn weak_table(d: &Domain) -> Vec<Vec<bool>> {
    let m = d.m();
    (0..m)
        .map(|p| {
            let with: Vec<usize> = d.with_peak(Alt::from_index(p)).collect();
            (0..m * m)
                .map(|uv| {
                    let (u, v) = (Alt::from_index(uv / m), Alt::from_index(uv % m));
                    with.iter().all(|&i| d.pref(i).weakly_prefers(u, v))
                })
                .collect()
        })
        .collect()
}

/// Every unanimous, tops-only, strategy-proof two-voter rule on `d`, as
/// peak tables sorted by table contents.
pub fn enum_topsonly_sp_rules(d: &Domain, budget: &Budget) -> Result<Vec<Scf>, EnumError> {
    enum_topsonly_sp_rules_with(d, budget, EnumLimits::default())
}

pub fn enum_topsonly_sp_rules_with(d: &Domain, budget: &Budget, limits: EnumLimits) -> Result<Vec<Scf>, EnumError> {
    let m = d.m();
    if m > limits.max_m || d.len() > limits.max_prefs {
        return Err(EnumError::TooLarge {
            m,
            prefs: d.len(),
            max_m: limits.max_m,
            max_prefs: limits.max_prefs,
        });
    }
    let peaks: Vec<Alt> = d.peak_set().iter().collect();
    let weak = weak_table(d);
    let dist = distances(&adjacency_graph(d), m);
    let mut start = vec![None; m * m];
    for &p in &peaks {
        start[p.index() * m + p.index()] = Some(p);
    }
    let mut cells: Vec<(usize, usize, usize)> = peaks
        .iter()
        .flat_map(|&p| peaks.iter().map(move |&q| (p.index(), q.index())))
        .filter(|(p, q)| p != q)
        .map(|(p, q)| (dist[p][q], p, q))
        .collect();
    cells.sort_unstable();
    let order: Vec<usize> = cells.iter().map(|&(_, p, q)| p * m + q).collect();
    let values: Vec<Alt> = (0..m).map(Alt::from_index).collect();
    let w = |p: usize, u: Alt, v: Alt| weak[p][u.index() * m + v.index()];
    let ok = |a: &Assignment, var: usize, u: Alt| {
        let (p, q) = (var / m, var % m);
        peaks.iter().all(|&r| {
            let r = r.index();
            // voter 1 moving between peaks p and r against q
            let col = match a[r * m + q] {
                Some(v) if r != p => w(p, u, v) && w(r, v, u),
                _ => true,
            };
            // voter 2 moving between peaks q and r against p
            let row = match a[p * m + r] {
                Some(v) if r != q => w(q, u, v) && w(r, v, u),
                _ => true,
            };
            col && row
        })
    };
    let search = Search {
        order: &order,
        values: &values,
        ok,
        budget,
    };
    let mut tables = search.run(start)?;
    tables.sort();
    Ok(tables
        .into_iter()
        .map(|t| make_peak_table(m, t).expect("table is m by m"))
        .collect())
}

/// Canonical form of a two-voter tops-only rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Dictatorship(usize),
    /// Every matching (tree, threshold).
    Projection(Vec<(Tree, Alt)>),
    /// Every matching (tree, a, b, dictator voter), free zones of three or
    /// more first, then adjacent thresholds.
    Hybrid(Vec<(Tree, Alt, Alt, usize)>),
    Other,
}

impl Decomposition {
    pub fn tag(&self) -> &'static str {
        match self {
            Decomposition::Dictatorship(_) => "dictatorship",
            Decomposition::Projection(_) => "projection",
            Decomposition::Hybrid(_) => "hybrid",
            Decomposition::Other => "other",
        }
    }

    /// The first matching canonical rule, if any.
    pub fn rule(&self) -> Option<Scf> {
        match self {
            Decomposition::Dictatorship(v) => make_dictatorship(*v, 2).ok(),
            Decomposition::Projection(ps) => ps.first().and_then(|(t, x)| make_projection(t.clone(), *x, 2).ok()),
            Decomposition::Hybrid(hs) => hs
                .first()
                .and_then(|(t, a, b, v)| make_hybrid_relaxed(t.clone(), *a, *b, *v, 2).ok()),
            Decomposition::Other => None,
        }
    }
}

/// Finds canonical rules equal to `f` on every profile of `d`.
///
/// Candidates are screened on the peak pairs occurring in `d` and every
/// match is then confirmed on the full profile table.
pub fn decompose_rule(f: &Scf, d: &Domain, budget: &Budget) -> Result<Decomposition, EnumError> {
    let ScfBody::PeakTable { m, table } = f.body() else {
        return Err(EnumError::NotPeakTable);
    };
    let m = *m;
    if m != d.m() {
        return Err(RuleError::SizeMismatch { rule: m, domain: d.m() }.into());
    }
    let peaks: Vec<Alt> = d.peak_set().iter().collect();
    let owned: Vec<(Alt, Alt, Alt)> = peaks
        .iter()
        .flat_map(|&p| peaks.iter().map(move |&q| (p, q)))
        .map(|(p, q)| {
            table[p.index() * m + q.index()]
                .map(|o| (p, q, o))
                .ok_or_else(|| RuleError::MissingEntry(d.label(p).to_string(), d.label(q).to_string()))
        })
        .collect::<Result<_, _>>()?;
    let pairs: &[(Alt, Alt, Alt)] = &owned;
    let target = OutcomeTable::build(f, d, budget)?;
    let confirm = |g: &Scf| -> Result<bool, EnumError> {
        Ok(OutcomeTable::build(g, d, &Budget::unlimited())?.outcomes == target.outcomes)
    };

    for v in 0..2 {
        if pairs.iter().all(|&(p, q, o)| o == if v == 0 { p } else { q }) && confirm(&make_dictatorship(v, 2)?)? {
            return Ok(Decomposition::Dictatorship(v));
        }
    }
    if m < 2 {
        return Ok(Decomposition::Other);
    }
    let trees: Vec<Tree> = enumerate_trees(m, DEFAULT_TREE_CAP)?.collect();
    budget.charge_product(&[trees.len() as u64, (m * m) as u64, pairs.len() as u64])?;

    let projections: Vec<(Tree, Alt)> = trees
        .par_iter()
        .flat_map_iter(|t| {
            (0..m)
                .map(Alt::from_index)
                .filter(move |&x| {
                    pairs
                        .iter()
                        .all(|&(p, q, o)| t.project_unchecked(x, t.interval(p, q)) == o)
                })
                .map(move |x| (t.clone(), x))
        })
        .collect();
    let mut confirmed = Vec::new();
    for (t, x) in projections {
        if confirm(&make_projection(t.clone(), x, 2)?)? {
            confirmed.push((t, x));
        }
    }
    if !confirmed.is_empty() {
        return Ok(Decomposition::Projection(confirmed));
    }

    let hybrids: Vec<(Tree, Alt, Alt, usize)> = trees
        .par_iter()
        .flat_map_iter(|t| {
            let mut found = Vec::new();
            for a in 0..m {
                for b in a + 1..m {
                    let (a, b) = (Alt::from_index(a), Alt::from_index(b));
                    let free = t.interval(a, b);
                    if !t.dual_thresholds_unchecked(a, b) {
                        continue;
                    }
                    let sa = t.side_set_unchecked(a, b).without(a);
                    for v in 0..2 {
                        let matches = pairs.iter().all(|&(p, q, o)| {
                            let top = if v == 0 { p } else { q };
                            let span = t.interval(p, q);
                            let want = if free.contains(top) {
                                top
                            } else if sa.contains(top) {
                                t.project_unchecked(a, span)
                            } else {
                                t.project_unchecked(b, span)
                            };
                            want == o
                        });
                        if matches {
                            found.push((t.clone(), a, b, v));
                        }
                    }
                }
            }
            found
        })
        .collect();
    let mut confirmed = Vec::new();
    for (t, a, b, v) in hybrids {
        if confirm(&make_hybrid_relaxed(t.clone(), a, b, v, 2)?)? {
            confirmed.push((t, a, b, v));
        }
    }
    confirmed.sort_by_key(|(t, a, b, _)| t.interval(*a, *b).len() < 3);
    if !confirmed.is_empty() {
        return Ok(Decomposition::Hybrid(confirmed));
    }
    Ok(Decomposition::Other)
}

/// Every unanimous strategy-proof SCF on `d` for `n` voters, tops-only or
/// not, as full tables sorted by contents.
pub fn enum_all_sp_rules_micro(d: &Domain, n: usize, budget: &Budget) -> Result<Vec<Scf>, EnumError> {
    let k = d.len();
    let size = profile_count(k, n).filter(|&s| s <= MAX_MICRO_PROFILES.min(MAX_FULL_TABLE));
    let size = size.ok_or(EnumError::TooManyProfiles(profile_count(k, n).unwrap_or(u64::MAX)))? as usize;
    let mut start = vec![None; size];
    let mut order = Vec::new();
    for (idx, slot) in start.iter_mut().enumerate() {
        let p = decode(idx as u64, k, n);
        let top = d.pref(p[0]).top();
        if p.iter().all(|&q| d.pref(q).top() == top) {
            *slot = Some(top);
        } else {
            order.push(idx);
        }
    }
    let values: Vec<Alt> = d.alternatives().collect();
    let strides: Vec<usize> = (0..n).map(|v| k.pow((n - 1 - v) as u32)).collect();
    let ok = |a: &Assignment, idx: usize, u: Alt| {
        strides.iter().all(|&s| {
            let own = (idx / s) % k;
            let base = idx - own * s;
            (0..k).filter(|&r| r != own).all(|r| match a[base + r * s] {
                Some(w) => d.pref(own).weakly_prefers(u, w) && d.pref(r).weakly_prefers(w, u),
                None => true,
            })
        })
    };
    let search = Search {
        order: &order,
        values: &values,
        ok,
        budget,
    };
    let mut tables = search.run(start)?;
    tables.sort();
    Ok(tables
        .into_iter()
        .map(|t| {
            let t: Vec<Alt> = t.into_iter().map(|o| o.expect("complete assignment")).collect();
            Scf::from_full_table(k, n, t)
        })
        .collect())
}
