//! Social choice functions and exhaustive axiom checks.
//!
//! Profiles are indexed in mixed radix over the domain's preference indices,
//! voter 0 most significant, so index order is lexicographic profile order.
//! Every check evaluates the SCF once per profile into an [`OutcomeTable`]
//! and reports the canonical-first counterexample.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::altset::AltSet;
use crate::budget::{Budget, BudgetExceeded};
use crate::pref::{Alt, Domain, Profile};
use crate::structure::{check_diversity, reversed_pairs};
use crate::tree::{Graph, Tree, TreeError};

/// Largest explicit profile table accepted.
pub const MAX_FULL_TABLE: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("profile has {got} voters, rule expects {expected}")]
    ProfileLength { expected: usize, got: usize },
    #[error("preference index {0} is out of range")]
    BadProfile(usize),
    #[error("peak table has no entry for peaks ({0}, {1})")]
    MissingEntry(String, String),
    #[error("table was built for a domain of {expected} preferences, got {got}")]
    TableDomain { expected: usize, got: usize },
    #[error("table of {0} profiles exceeds the limit {MAX_FULL_TABLE}")]
    TableTooLarge(u64),
    #[error("free zone has {0} alternatives; a hybrid rule needs at least 3")]
    FreeZoneTooSmall(usize),
    #[error("voter {voter} out of range for n = {n}")]
    BadVoter { voter: usize, n: usize },
    #[error("the two voters must be distinct")]
    SameVoters,
    #[error("the two alternatives must be distinct")]
    SameAlternatives,
    #[error("the rule needs at least {0} voters")]
    TooFewVoters(usize),
    #[error("rule is defined on {rule} alternatives, domain has {domain}")]
    SizeMismatch { rule: usize, domain: usize },
    #[error("invariance is defined for two voters only")]
    NotTwoVoters,
    #[error("the domain has no completely reversed pair")]
    NoReversedPair,
    #[error("unknown alternative `{0}`")]
    UnknownLabel(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScfBody {
    Projection {
        tree: Tree,
        threshold: Alt,
    },
    Hybrid {
        tree: Tree,
        a: Alt,
        b: Alt,
        voter: usize,
        // (A^{a⇀b} \ {a}, A^{b⇀a} \ {b}, free zone)
        zones: (AltSet, AltSet, AltSet),
    },
    Pnt {
        tree: Tree,
        x: Alt,
        y: Alt,
        i: usize,
        j: usize,
        // A^{x⇀y}
        x_side: AltSet,
    },
    Dictatorship {
        voter: usize,
    },
    AlmostDictatorship {
        x: Alt,
        y: Alt,
        i: usize,
        j: usize,
    },
    /// Two voters, `table[p * m + q]` for peaks `(p, q)`.
    PeakTable {
        m: usize,
        table: Vec<Option<Alt>>,
    },
    /// One outcome per profile index over a domain of `k` preferences.
    FullTable {
        k: usize,
        table: Vec<Alt>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scf {
    n: usize,
    body: ScfBody,
}

fn check_voter(voter: usize, n: usize) -> Result<(), RuleError> {
    if voter >= n {
        Err(RuleError::BadVoter { voter, n })
    } else {
        Ok(())
    }
}

fn check_pair(i: usize, j: usize, n: usize) -> Result<(), RuleError> {
    if n < 2 {
        return Err(RuleError::TooFewVoters(2));
    }
    check_voter(i, n)?;
    check_voter(j, n)?;
    if i == j {
        return Err(RuleError::SameVoters);
    }
    Ok(())
}

pub fn make_projection(tree: Tree, threshold: Alt, n: usize) -> Result<Scf, RuleError> {
    if n == 0 {
        return Err(RuleError::TooFewVoters(1));
    }
    if threshold.index() >= tree.m() {
        return Err(RuleError::SizeMismatch {
            rule: tree.m(),
            domain: threshold.index() + 1,
        });
    }
    Ok(Scf {
        n,
        body: ScfBody::Projection { tree, threshold },
    })
}

pub fn make_hybrid(tree: Tree, a: Alt, b: Alt, voter: usize, n: usize) -> Result<Scf, RuleError> {
    hybrid_with_min_zone(tree, a, b, voter, n, 3)
}

/// Like [`make_hybrid`] but also accepts adjacent thresholds (a free zone of
/// two). Such rules show up among the tops-only strategy-proof rules of
/// semi-single-peaked domains.
pub fn make_hybrid_relaxed(tree: Tree, a: Alt, b: Alt, voter: usize, n: usize) -> Result<Scf, RuleError> {
    hybrid_with_min_zone(tree, a, b, voter, n, 2)
}

fn hybrid_with_min_zone(tree: Tree, a: Alt, b: Alt, voter: usize, n: usize, min: usize) -> Result<Scf, RuleError> {
    check_voter(voter, n)?;
    if a.index() >= tree.m() || b.index() >= tree.m() || !tree.is_dual_thresholds(a, b)? {
        return Err(TreeError::NotDualThresholds(a.0, b.0).into());
    }
    let free = tree.interval(a, b);
    if free.len() < min {
        return Err(RuleError::FreeZoneTooSmall(free.len()));
    }
    let sa = tree.side_set_unchecked(a, b).without(a);
    let sb = tree.side_set_unchecked(b, a).without(b);
    Ok(Scf {
        n,
        body: ScfBody::Hybrid {
            tree,
            a,
            b,
            voter,
            zones: (sa, sb, free),
        },
    })
}

pub fn make_pnt(tree: Tree, x: Alt, y: Alt, i: usize, j: usize, n: usize) -> Result<Scf, RuleError> {
    check_pair(i, j, n)?;
    if x.index() >= tree.m() || y.index() >= tree.m() || !tree.graph().has_edge(x, y) {
        return Err(TreeError::NotAnEdge(x.0, y.0).into());
    }
    let x_side = tree.side_set_unchecked(x, y);
    Ok(Scf {
        n,
        body: ScfBody::Pnt {
            tree,
            x,
            y,
            i,
            j,
            x_side,
        },
    })
}

pub fn make_dictatorship(voter: usize, n: usize) -> Result<Scf, RuleError> {
    check_voter(voter, n)?;
    Ok(Scf {
        n,
        body: ScfBody::Dictatorship { voter },
    })
}

pub fn make_almost_dictatorship(x: Alt, y: Alt, i: usize, j: usize, n: usize) -> Result<Scf, RuleError> {
    check_pair(i, j, n)?;
    if x == y {
        return Err(RuleError::SameAlternatives);
    }
    Ok(Scf {
        n,
        body: ScfBody::AlmostDictatorship { x, y, i, j },
    })
}

/// Two-voter tops-only rule given by its peak table (`None` for peak pairs
/// that never occur).
pub fn make_peak_table(m: usize, table: Vec<Option<Alt>>) -> Result<Scf, RuleError> {
    if table.len() != m * m {
        return Err(RuleError::SizeMismatch {
            rule: table.len(),
            domain: m * m,
        });
    }
    Ok(Scf {
        n: 2,
        body: ScfBody::PeakTable { m, table },
    })
}

/// Tabulates an arbitrary SCF over every profile of `d`.
pub fn make_full_table(d: &Domain, n: usize, f: impl Fn(&[usize]) -> Alt + Sync) -> Result<Scf, RuleError> {
    let size = profile_count(d.len(), n).ok_or(RuleError::TableTooLarge(u64::MAX))?;
    if size > MAX_FULL_TABLE {
        return Err(RuleError::TableTooLarge(size));
    }
    let k = d.len();
    let table = (0..size).into_par_iter().map(|idx| f(&decode(idx, k, n))).collect();
    Ok(Scf {
        n,
        body: ScfBody::FullTable { k, table },
    })
}

impl Scf {
    /// Wraps a precomputed outcome table over `k` preferences and `n` voters.
    pub fn from_full_table(k: usize, n: usize, table: Vec<Alt>) -> Scf {
        assert_eq!(Some(table.len() as u64), profile_count(k, n), "table size");
        Scf {
            n,
            body: ScfBody::FullTable { k, table },
        }
    }
}

/// `k^n`, or `None` on overflow.
pub fn profile_count(k: usize, n: usize) -> Option<u64> {
    (k as u64).checked_pow(n as u32)
}

/// Profile at mixed-radix index `idx` (voter 0 most significant).
pub fn decode(mut idx: u64, k: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0usize; n];
    for slot in out.iter_mut().rev() {
        *slot = (idx % k as u64) as usize;
        idx /= k as u64;
    }
    out
}

pub fn encode(profile: &[usize], k: usize) -> u64 {
    profile.iter().fold(0u64, |acc, &p| acc * k as u64 + p as u64)
}

impl Scf {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn body(&self) -> &ScfBody {
        &self.body
    }

    pub fn kind_name(&self) -> &'static str {
        match self.body {
            ScfBody::Projection { .. } => "projection",
            ScfBody::Hybrid { .. } => "hybrid",
            ScfBody::Pnt { .. } => "pnt",
            ScfBody::Dictatorship { .. } => "dictatorship",
            ScfBody::AlmostDictatorship { .. } => "almost_dictatorship",
            ScfBody::PeakTable { .. } => "peak_table",
            ScfBody::FullTable { .. } => "full_table",
        }
    }

    /// Same rule for a different number of voters, where that makes sense.
    pub fn with_voters(&self, n: usize) -> Result<Scf, RuleError> {
        match &self.body {
            ScfBody::Projection { tree, threshold } => make_projection(tree.clone(), *threshold, n),
            ScfBody::Hybrid { tree, a, b, voter, .. } => make_hybrid_relaxed(tree.clone(), *a, *b, *voter, n),
            ScfBody::Pnt { tree, x, y, i, j, .. } => make_pnt(tree.clone(), *x, *y, *i, *j, n),
            ScfBody::Dictatorship { voter } => make_dictatorship(*voter, n),
            ScfBody::AlmostDictatorship { x, y, i, j } => make_almost_dictatorship(*x, *y, *i, *j, n),
            ScfBody::PeakTable { .. } | ScfBody::FullTable { .. } if n == self.n => Ok(self.clone()),
            _ => Err(RuleError::NotTwoVoters),
        }
    }

    fn tree_size(&self) -> Option<usize> {
        match &self.body {
            ScfBody::Projection { tree, .. } | ScfBody::Hybrid { tree, .. } | ScfBody::Pnt { tree, .. } => {
                Some(tree.m())
            }
            ScfBody::PeakTable { m, .. } => Some(*m),
            _ => None,
        }
    }

    /// Checks that the rule can be evaluated on `d`.
    pub fn check_domain(&self, d: &Domain) -> Result<(), RuleError> {
        if let Some(m) = self.tree_size() {
            if m != d.m() {
                return Err(RuleError::SizeMismatch { rule: m, domain: d.m() });
            }
        }
        match &self.body {
            ScfBody::FullTable { k, .. } if *k != d.len() => Err(RuleError::TableDomain {
                expected: *k,
                got: d.len(),
            }),
            ScfBody::AlmostDictatorship { x, y, .. } if x.index() >= d.m() || y.index() >= d.m() => {
                Err(RuleError::SizeMismatch {
                    rule: x.index().max(y.index()) + 1,
                    domain: d.m(),
                })
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, d: &Domain, profile: &Profile) -> Result<Alt, RuleError> {
        if profile.n() != self.n {
            return Err(RuleError::ProfileLength {
                expected: self.n,
                got: profile.n(),
            });
        }
        if let Some(&bad) = profile.0.iter().find(|&&i| i >= d.len()) {
            return Err(RuleError::BadProfile(bad));
        }
        self.check_domain(d)?;
        self.eval_raw(d, &profile.0)
    }

    /// Evaluation without the length and range checks.
    pub fn eval_raw(&self, d: &Domain, profile: &[usize]) -> Result<Alt, RuleError> {
        let peak = |v: usize| d.pref(profile[v]).top();
        let gamma = |tree: &Tree| {
            let peaks: Vec<Alt> = profile.iter().map(|&p| d.pref(p).top()).collect();
            tree.minimal_subtree(&peaks)
        };
        Ok(match &self.body {
            ScfBody::Projection { tree, threshold } => tree.project_unchecked(*threshold, gamma(tree)),
            ScfBody::Hybrid {
                tree,
                a,
                b,
                voter,
                zones: (sa, _, free),
            } => {
                let top = peak(*voter);
                if free.contains(top) {
                    top
                } else if sa.contains(top) {
                    tree.project_unchecked(*a, gamma(tree))
                } else {
                    tree.project_unchecked(*b, gamma(tree))
                }
            }
            ScfBody::Pnt {
                tree,
                x,
                y,
                i,
                j,
                x_side,
            } => {
                let (ti, tj) = (peak(*i), peak(*j));
                if !x_side.contains(ti) {
                    ti
                } else if x_side.contains(tj) {
                    tree.project_unchecked(*x, gamma(tree))
                } else if d.pref(profile[*j]).prefers(*x, *y) {
                    *x
                } else {
                    *y
                }
            }
            ScfBody::Dictatorship { voter } => peak(*voter),
            ScfBody::AlmostDictatorship { x, y, i, j } => {
                let ti = peak(*i);
                if ti != *x {
                    ti
                } else if d.pref(profile[*j]).prefers(*x, *y) {
                    *x
                } else {
                    *y
                }
            }
            ScfBody::PeakTable { m, table } => {
                let (p, q) = (peak(0), peak(1));
                table[p.index() * m + q.index()]
                    .ok_or_else(|| RuleError::MissingEntry(d.label(p).to_string(), d.label(q).to_string()))?
            }
            ScfBody::FullTable { k, table } => table[encode(profile, *k) as usize],
        })
    }

    /// Peak table of a two-voter rule that is tops-only on `d`, sampling the
    /// first profile with each peak pair.
    pub fn to_peak_table(&self, d: &Domain) -> Result<Scf, RuleError> {
        if self.n != 2 {
            return Err(RuleError::NotTwoVoters);
        }
        let m = d.m();
        let mut table = vec![None; m * m];
        for (pi, p) in d.prefs().iter().enumerate() {
            for (qi, q) in d.prefs().iter().enumerate() {
                let slot = &mut table[p.top().index() * m + q.top().index()];
                if slot.is_none() {
                    *slot = Some(self.eval_raw(d, &[pi, qi])?);
                }
            }
        }
        make_peak_table(m, table)
    }
}

// ---------------------------------------------------------------------------
// Axiom checks

/// Outcomes of an SCF at every profile of `d^n`.
#[derive(Clone, Debug)]
pub struct OutcomeTable {
    pub n: usize,
    pub k: usize,
    pub outcomes: Vec<Alt>,
}

impl OutcomeTable {
    pub fn build(f: &Scf, d: &Domain, budget: &Budget) -> Result<Self, RuleError> {
        f.check_domain(d)?;
        let (n, k) = (f.n(), d.len());
        let size = profile_count(k, n).ok_or(BudgetExceeded { limit: budget.limit() })?;
        budget.charge(size)?;
        let outcomes = (0..size)
            .into_par_iter()
            .map(|idx| f.eval_raw(d, &decode(idx, k, n)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OutcomeTable { n, k, outcomes })
    }

    pub fn len(&self) -> u64 {
        self.outcomes.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn at(&self, idx: u64) -> Alt {
        self.outcomes[idx as usize]
    }

    pub fn get(&self, profile: &[usize]) -> Alt {
        self.at(encode(profile, self.k))
    }

    fn stride(&self, voter: usize) -> u64 {
        (self.k as u64).pow((self.n - 1 - voter) as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// The profile's common peak is not chosen.
    Unanimity { profile: Profile, peak: Alt, outcome: Alt },
    /// `voter` gains by reporting preference `deviation` instead.
    Manipulation {
        voter: usize,
        profile: Profile,
        deviation: usize,
        outcome: Alt,
        deviated_outcome: Alt,
    },
    /// Two profiles with the same peaks and different outcomes.
    TopsOnly {
        first: Profile,
        second: Profile,
        first_outcome: Alt,
        second_outcome: Alt,
    },
    /// Swapping voters `swap.0` and `swap.1` changes the outcome.
    Anonymity {
        profile: Profile,
        swap: (usize, usize),
        outcome: Alt,
        swapped_outcome: Alt,
    },
    /// The two test profiles built from a reversed pair differ.
    Invariance {
        pair: (usize, usize),
        first_outcome: Alt,
        second_outcome: Alt,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub axiom: Axiom,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl AxiomResult {
    fn from(axiom: Axiom, witness: Option<Witness>) -> Self {
        AxiomResult {
            axiom,
            holds: witness.is_none(),
            witness,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Unanimity,
    StrategyProof,
    TopsOnly,
    Anonymity,
    Invariance,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [
        Axiom::Unanimity,
        Axiom::StrategyProof,
        Axiom::TopsOnly,
        Axiom::Anonymity,
        Axiom::Invariance,
    ];

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "unanimity" => Some(Axiom::Unanimity),
            "sp" | "strategy_proof" => Some(Axiom::StrategyProof),
            "topsonly" | "tops_only" => Some(Axiom::TopsOnly),
            "anon" | "anonymity" => Some(Axiom::Anonymity),
            "inv" | "invariance" => Some(Axiom::Invariance),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Unanimity => "unanimity",
            Axiom::StrategyProof => "strategy_proof",
            Axiom::TopsOnly => "tops_only",
            Axiom::Anonymity => "anonymity",
            Axiom::Invariance => "invariance",
        }
    }
}

pub fn check_unanimity(f: &Scf, d: &Domain, budget: &Budget) -> Result<AxiomResult, RuleError> {
    let t = OutcomeTable::build(f, d, budget)?;
    Ok(unanimity_on(&t, d))
}

pub fn unanimity_on(t: &OutcomeTable, d: &Domain) -> AxiomResult {
    let w = (0..t.len()).into_par_iter().find_map_first(|idx| {
        let p = decode(idx, t.k, t.n);
        let peak = d.pref(p[0]).top();
        if p.iter().all(|&q| d.pref(q).top() == peak) && t.at(idx) != peak {
            Some(Witness::Unanimity {
                profile: Profile(p),
                peak,
                outcome: t.at(idx),
            })
        } else {
            None
        }
    });
    AxiomResult::from(Axiom::Unanimity, w)
}

pub fn check_strategy_proof(f: &Scf, d: &Domain, budget: &Budget) -> Result<AxiomResult, RuleError> {
    let n = f.n() as u64;
    // one deviation per voter per profile
    let size = profile_count(d.len(), f.n() + 1).ok_or(BudgetExceeded { limit: budget.limit() })?;
    budget.charge_product(&[n, size])?;
    let t = OutcomeTable::build(f, d, &Budget::unlimited())?;
    Ok(strategy_proof_on(&t, d))
}

pub fn strategy_proof_on(t: &OutcomeTable, d: &Domain) -> AxiomResult {
    let (n, k) = (t.n, t.k);
    let m = d.m();
    // better[p * m + o]: alternatives preference p ranks strictly above o
    let better: Vec<AltSet> = d
        .prefs()
        .iter()
        .flat_map(|p| {
            (0..m).map(move |o| {
                let o = Alt::from_index(o);
                p.ranking()[..p.pos(o) as usize].iter().copied().collect()
            })
        })
        .collect();
    let size = t.len();
    let others = size / k as u64;
    // reach[v][rest]: outcomes voter v can force given the others' report
    let reach: Vec<Vec<AltSet>> = (0..n)
        .map(|v| {
            let stride = t.stride(v);
            (0..others)
                .into_par_iter()
                .map(|rest| {
                    let base = (rest / stride) * stride * k as u64 + rest % stride;
                    (0..k as u64)
                        .map(|q| AltSet::single(t.at(base + q * stride)))
                        .fold(AltSet::EMPTY, AltSet::union)
                })
                .collect()
        })
        .collect();
    let w = (0..n as u64 * size).into_par_iter().find_map_first(|flat| {
        let v = (flat / size) as usize;
        let idx = flat % size;
        let stride = t.stride(v);
        let own = ((idx / stride) % k as u64) as usize;
        let rest = (idx / (stride * k as u64)) * stride + idx % stride;
        let out = t.at(idx);
        let gain = reach[v][rest as usize].intersection(better[own * m + out.index()]);
        if gain.is_empty() {
            return None;
        }
        let base = idx - own as u64 * stride;
        let dev = (0..k)
            .find(|&q| gain.contains(t.at(base + q as u64 * stride)))
            .expect("some deviation reaches the gain");
        Some(Witness::Manipulation {
            voter: v,
            profile: Profile(decode(idx, k, n)),
            deviation: dev,
            outcome: out,
            deviated_outcome: t.at(base + dev as u64 * stride),
        })
    });
    AxiomResult::from(Axiom::StrategyProof, w)
}

pub fn check_tops_only(f: &Scf, d: &Domain, budget: &Budget) -> Result<AxiomResult, RuleError> {
    let t = OutcomeTable::build(f, d, budget)?;
    Ok(tops_only_on(&t, d))
}

pub fn tops_only_on(t: &OutcomeTable, d: &Domain) -> AxiomResult {
    let (n, k, m) = (t.n, t.k, d.m());
    let peak_key = |p: &[usize]| {
        p.iter()
            .fold(0u64, |acc, &q| acc * m as u64 + d.pref(q).top().index() as u64)
    };
    let mut first: std::collections::HashMap<u64, u64> = std::collections::HashMap::new();
    let mut w = None;
    for idx in 0..t.len() {
        let p = decode(idx, k, n);
        let key = peak_key(&p);
        match first.get(&key) {
            None => {
                first.insert(key, idx);
            }
            Some(&f0) if t.at(f0) != t.at(idx) => {
                w = Some(Witness::TopsOnly {
                    first: Profile(decode(f0, k, n)),
                    second: Profile(p),
                    first_outcome: t.at(f0),
                    second_outcome: t.at(idx),
                });
                break;
            }
            _ => {}
        }
    }
    AxiomResult::from(Axiom::TopsOnly, w)
}

pub fn check_anonymity(f: &Scf, d: &Domain, budget: &Budget) -> Result<AxiomResult, RuleError> {
    let t = OutcomeTable::build(f, d, budget)?;
    Ok(anonymity_on(&t))
}

/// Adjacent transpositions generate every permutation, so checking them is
/// enough.
pub fn anonymity_on(t: &OutcomeTable) -> AxiomResult {
    let (n, k) = (t.n, t.k);
    let w = (0..t.len()).into_par_iter().find_map_first(|idx| {
        let p = decode(idx, k, n);
        (0..n.saturating_sub(1)).find_map(|v| {
            let mut q = p.clone();
            q.swap(v, v + 1);
            let other = t.get(&q);
            (other != t.at(idx)).then(|| Witness::Anonymity {
                profile: Profile(p.clone()),
                swap: (v, v + 1),
                outcome: t.at(idx),
                swapped_outcome: other,
            })
        })
    });
    AxiomResult::from(Axiom::Anonymity, w)
}

pub fn check_invariance(f: &Scf, d: &Domain, budget: &Budget) -> Result<AxiomResult, RuleError> {
    if f.n() != 2 {
        return Err(RuleError::NotTwoVoters);
    }
    f.check_domain(d)?;
    if d.m() == 1 {
        return Ok(AxiomResult::from(Axiom::Invariance, None));
    }
    let pair = check_diversity(d).ok_or(RuleError::NoReversedPair)?;
    budget.charge(2)?;
    invariance_for(f, d, pair)
}

/// A reversed pair of preference indices and its invariance result.
pub type PairResult = ((usize, usize), AxiomResult);

/// Per-pair invariance results over every reversed pair.
pub fn check_invariance_strict(f: &Scf, d: &Domain, budget: &Budget) -> Result<Vec<PairResult>, RuleError> {
    if f.n() != 2 {
        return Err(RuleError::NotTwoVoters);
    }
    f.check_domain(d)?;
    let pairs = reversed_pairs(d);
    if pairs.is_empty() {
        return Err(RuleError::NoReversedPair);
    }
    budget.charge(2 * pairs.len() as u64)?;
    pairs
        .into_iter()
        .map(|pair| Ok((pair, invariance_for(f, d, pair)?)))
        .collect()
}

fn invariance_for(f: &Scf, d: &Domain, (i, j): (usize, usize)) -> Result<AxiomResult, RuleError> {
    let x = f.eval_raw(d, &[i, j])?;
    let y = f.eval_raw(d, &[j, i])?;
    let w = (x != y).then_some(Witness::Invariance {
        pair: (i, j),
        first_outcome: x,
        second_outcome: y,
    });
    Ok(AxiomResult::from(Axiom::Invariance, w))
}

/// Lowest voter whose peak is chosen at every profile with all peaks in `set`.
pub fn dictator_on(f: &Scf, d: &Domain, set: AltSet, budget: &Budget) -> Result<Option<usize>, RuleError> {
    let t = OutcomeTable::build(f, d, budget)?;
    Ok(dictator_on_table(&t, d, set))
}

pub fn dictator_on_table(t: &OutcomeTable, d: &Domain, set: AltSet) -> Option<usize> {
    let (n, k) = (t.n, t.k);
    (0..n).find(|&v| {
        (0..t.len()).into_par_iter().all(|idx| {
            let p = decode(idx, k, n);
            !p.iter().all(|&q| set.contains(d.pref(q).top())) || t.at(idx) == d.pref(p[v]).top()
        })
    })
}

/// For each voter, the first profile where the outcome is not that voter's peak.
pub fn non_dictatorship_witnesses(t: &OutcomeTable, d: &Domain) -> Vec<Option<Profile>> {
    let (n, k) = (t.n, t.k);
    (0..n)
        .map(|v| {
            (0..t.len()).into_par_iter().find_map_first(|idx| {
                let p = decode(idx, k, n);
                (t.at(idx) != d.pref(p[v]).top()).then_some(Profile(p))
            })
        })
        .collect()
}

/// Runs the requested checks off one outcome table.
pub fn check_axioms(f: &Scf, d: &Domain, axioms: &[Axiom], budget: &Budget) -> Result<Vec<AxiomResult>, RuleError> {
    let mut cost = 0u64;
    if axioms.contains(&Axiom::StrategyProof) {
        let size = profile_count(d.len(), f.n() + 1).ok_or(BudgetExceeded { limit: budget.limit() })?;
        cost = size
            .checked_mul(f.n() as u64)
            .ok_or(BudgetExceeded { limit: budget.limit() })?;
    } else if axioms.iter().any(|a| *a != Axiom::Invariance) {
        cost = profile_count(d.len(), f.n()).ok_or(BudgetExceeded { limit: budget.limit() })?;
    }
    budget.charge(cost)?;
    let needs_table = axioms.iter().any(|a| *a != Axiom::Invariance);
    let table = if needs_table {
        Some(OutcomeTable::build(f, d, &Budget::unlimited())?)
    } else {
        f.check_domain(d)?;
        None
    };
    axioms
        .iter()
        .map(|a| {
            let t = table.as_ref();
            Ok(match a {
                Axiom::Unanimity => unanimity_on(t.expect("table"), d),
                Axiom::StrategyProof => strategy_proof_on(t.expect("table"), d),
                Axiom::TopsOnly => tops_only_on(t.expect("table"), d),
                Axiom::Anonymity => anonymity_on(t.expect("table")),
                Axiom::Invariance => check_invariance(f, d, &Budget::unlimited())?,
            })
        })
        .collect()
}

/// Confirms that a witness really exhibits a violation.
pub fn recheck(f: &Scf, d: &Domain, w: &Witness) -> Result<bool, RuleError> {
    let ev = |p: &[usize]| f.eval(d, &Profile(p.to_vec()));
    Ok(match w {
        Witness::Unanimity { profile, peak, outcome } => {
            profile.0.iter().all(|&q| d.pref(q).top() == *peak) && ev(&profile.0)? == *outcome && outcome != peak
        }
        Witness::Manipulation {
            voter,
            profile,
            deviation,
            outcome,
            deviated_outcome,
        } => {
            let mut dev = profile.0.clone();
            dev[*voter] = *deviation;
            ev(&profile.0)? == *outcome
                && ev(&dev)? == *deviated_outcome
                && d.pref(profile.0[*voter]).prefers(*deviated_outcome, *outcome)
        }
        Witness::TopsOnly {
            first,
            second,
            first_outcome,
            second_outcome,
        } => {
            first.peaks(d) == second.peaks(d)
                && ev(&first.0)? == *first_outcome
                && ev(&second.0)? == *second_outcome
                && first_outcome != second_outcome
        }
        Witness::Anonymity {
            profile,
            swap,
            outcome,
            swapped_outcome,
        } => {
            let mut q = profile.0.clone();
            q.swap(swap.0, swap.1);
            ev(&profile.0)? == *outcome && ev(&q)? == *swapped_outcome && outcome != swapped_outcome
        }
        Witness::Invariance {
            pair,
            first_outcome,
            second_outcome,
        } => {
            d.pref(pair.0).is_complete_reversal(d.pref(pair.1))
                && ev(&[pair.0, pair.1])? == *first_outcome
                && ev(&[pair.1, pair.0])? == *second_outcome
                && first_outcome != second_outcome
        }
    })
}

// ---------------------------------------------------------------------------
// Rule spec files

/// JSON rule description with alternatives named by label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuleSpec {
    Projection {
        tree: Vec<(String, String)>,
        threshold: String,
        n: usize,
    },
    Hybrid {
        tree: Vec<(String, String)>,
        thresholds: (String, String),
        voter: usize,
        n: usize,
    },
    Pnt {
        tree: Vec<(String, String)>,
        edge: (String, String),
        voters: (usize, usize),
        n: usize,
    },
    Dictatorship {
        voter: usize,
        n: usize,
    },
    AlmostDictatorship {
        x: String,
        y: String,
        voters: (usize, usize),
        n: usize,
    },
    /// Rows by the first voter's peak, columns by the second's, in
    /// alternative order; `null` marks peak pairs that never occur.
    PeakTable {
        table: Vec<Vec<Option<String>>>,
    },
}

fn lookup(d: &Domain, l: &str) -> Result<Alt, RuleError> {
    d.alt(l).ok_or_else(|| RuleError::UnknownLabel(l.to_string()))
}

fn build_tree(d: &Domain, edges: &[(String, String)]) -> Result<Tree, RuleError> {
    let es = edges
        .iter()
        .map(|(a, b)| Ok((lookup(d, a)?, lookup(d, b)?)))
        .collect::<Result<Vec<_>, RuleError>>()?;
    Ok(Tree::new(Graph::from_edges(d.m(), es))?)
}

fn tree_labels(d: &Domain, t: &Tree) -> Vec<(String, String)> {
    t.edges()
        .into_iter()
        .map(|(a, b)| (d.label(a).to_string(), d.label(b).to_string()))
        .collect()
}

impl RuleSpec {
    pub fn build(&self, d: &Domain) -> Result<Scf, RuleError> {
        match self {
            RuleSpec::Projection { tree, threshold, n } => {
                make_projection(build_tree(d, tree)?, lookup(d, threshold)?, *n)
            }
            RuleSpec::Hybrid {
                tree,
                thresholds: (a, b),
                voter,
                n,
            } => make_hybrid(build_tree(d, tree)?, lookup(d, a)?, lookup(d, b)?, *voter, *n),
            RuleSpec::Pnt {
                tree,
                edge: (x, y),
                voters: (i, j),
                n,
            } => make_pnt(build_tree(d, tree)?, lookup(d, x)?, lookup(d, y)?, *i, *j, *n),
            RuleSpec::Dictatorship { voter, n } => make_dictatorship(*voter, *n),
            RuleSpec::AlmostDictatorship {
                x,
                y,
                voters: (i, j),
                n,
            } => make_almost_dictatorship(lookup(d, x)?, lookup(d, y)?, *i, *j, *n),
            RuleSpec::PeakTable { table } => {
                let m = d.m();
                if table.len() != m || table.iter().any(|r| r.len() != m) {
                    return Err(RuleError::SizeMismatch {
                        rule: table.len(),
                        domain: m,
                    });
                }
                let cells = table
                    .iter()
                    .flatten()
                    .map(|c| c.as_deref().map(|l| lookup(d, l)).transpose())
                    .collect::<Result<Vec<_>, _>>()?;
                make_peak_table(m, cells)
            }
        }
    }

    /// Spec for a constructed rule; `None` for explicit profile tables.
    pub fn describe(f: &Scf, d: &Domain) -> Option<RuleSpec> {
        let l = |a: &Alt| d.label(*a).to_string();
        Some(match f.body() {
            ScfBody::Projection { tree, threshold } => RuleSpec::Projection {
                tree: tree_labels(d, tree),
                threshold: l(threshold),
                n: f.n(),
            },
            ScfBody::Hybrid { tree, a, b, voter, .. } => RuleSpec::Hybrid {
                tree: tree_labels(d, tree),
                thresholds: (l(a), l(b)),
                voter: *voter,
                n: f.n(),
            },
            ScfBody::Pnt { tree, x, y, i, j, .. } => RuleSpec::Pnt {
                tree: tree_labels(d, tree),
                edge: (l(x), l(y)),
                voters: (*i, *j),
                n: f.n(),
            },
            ScfBody::Dictatorship { voter } => RuleSpec::Dictatorship {
                voter: *voter,
                n: f.n(),
            },
            ScfBody::AlmostDictatorship { x, y, i, j } => RuleSpec::AlmostDictatorship {
                x: l(x),
                y: l(y),
                voters: (*i, *j),
                n: f.n(),
            },
            ScfBody::PeakTable { m, table } => RuleSpec::PeakTable {
                table: table
                    .chunks(*m)
                    .map(|row| row.iter().map(|c| c.as_ref().map(l)).collect())
                    .collect(),
            },
            ScfBody::FullTable { .. } => return None,
        })
    }
}
