//! Alternatives, strict preferences, domains and profiles.
//!
//! Alternatives are dense ids `0..m` assigned in declaration order. A
//! [`Preference`] stores its ranking best-first together with the inverse
//! permutation so rank lookups are O(1).

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::altset::AltSet;

/// Upper bound on the number of alternatives (sets are stored as `u64` masks).
pub const MAX_ALTERNATIVES: usize = 64;

/// Dense alternative id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alt(pub u8);

impl Alt {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        debug_assert!(i < MAX_ALTERNATIVES);
        Alt(i as u8)
    }
}

impl fmt::Display for Alt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DomainError {
    #[error("alternative list is empty")]
    EmptyAlternatives,
    #[error("too many alternatives: {0} (limit {MAX_ALTERNATIVES})")]
    TooManyAlternatives(usize),
    #[error("duplicate alternative label `{0}`")]
    DuplicateLabel(String),
    #[error("empty alternative label")]
    EmptyLabel,
    #[error("line {line}: unknown alternative `{label}`")]
    UnknownLabel { line: usize, label: String },
    #[error("line {line}: ranking is not a permutation of the {m} alternatives")]
    NotAPermutation { line: usize, m: usize },
    #[error("line {line}: duplicate preference (same as line {first})")]
    DuplicatePreference { line: usize, first: usize },
    #[error("missing `alternatives:` header")]
    MissingHeader,
    #[error("line {line}: unrecognised directive `{text}`")]
    BadLine { line: usize, text: String },
    #[error("domain has no preferences")]
    NoPreferences,
    #[error("invalid JSON domain: {0}")]
    Json(String),
}

/// A strict linear order over `0..m`, best first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Preference {
    ranking: Vec<Alt>,
    rank: Vec<u8>,
}

impl Preference {
    /// Builds a preference from a best-first ranking; `None` unless it is a
    /// permutation of `0..ranking.len()`.
    pub fn new(ranking: Vec<Alt>) -> Option<Self> {
        let m = ranking.len();
        if m == 0 || m > MAX_ALTERNATIVES {
            return None;
        }
        let mut rank = vec![u8::MAX; m];
        for (pos, a) in ranking.iter().enumerate() {
            let slot = rank.get_mut(a.index())?;
            if *slot != u8::MAX {
                return None;
            }
            *slot = pos as u8;
        }
        Some(Preference { ranking, rank })
    }

    pub fn from_indices(ids: &[usize]) -> Option<Self> {
        if ids.iter().any(|&i| i >= MAX_ALTERNATIVES) {
            return None;
        }
        Self::new(ids.iter().map(|&i| Alt::from_index(i)).collect())
    }

    pub fn m(&self) -> usize {
        self.ranking.len()
    }

    pub fn ranking(&self) -> &[Alt] {
        &self.ranking
    }

    pub fn top(&self) -> Alt {
        self.ranking[0]
    }

    pub fn second(&self) -> Option<Alt> {
        self.ranking.get(1).copied()
    }

    pub fn bottom(&self) -> Alt {
        self.ranking[self.ranking.len() - 1]
    }

    /// `k`th ranked alternative, 1-based.
    pub fn at_rank(&self, k: usize) -> Alt {
        self.ranking[k - 1]
    }

    /// 1-based rank of `a`.
    pub fn rank_of(&self, a: Alt) -> usize {
        self.rank[a.index()] as usize + 1
    }

    /// 0-based position, for hot loops.
    #[inline]
    pub fn pos(&self, a: Alt) -> u8 {
        self.rank[a.index()]
    }

    /// `a` strictly above `b`.
    #[inline]
    pub fn prefers(&self, a: Alt, b: Alt) -> bool {
        self.rank[a.index()] < self.rank[b.index()]
    }

    /// `a` is at least as good as `b`.
    #[inline]
    pub fn weakly_prefers(&self, a: Alt, b: Alt) -> bool {
        self.rank[a.index()] <= self.rank[b.index()]
    }

    pub fn is_complete_reversal(&self, other: &Preference) -> bool {
        self.m() == other.m() && self.ranking.iter().zip(other.ranking.iter().rev()).all(|(a, b)| a == b)
    }

    pub fn reversed(&self) -> Preference {
        let mut r = self.ranking.clone();
        r.reverse();
        Preference::new(r).expect("reversal of a permutation")
    }

    /// Highest-ranked member of `set`; `None` if empty.
    pub fn best_in(&self, set: AltSet) -> Option<Alt> {
        set.iter().min_by_key(|a| self.rank[a.index()])
    }

    /// Lowest-ranked member of `set`; `None` if empty.
    pub fn worst_in(&self, set: AltSet) -> Option<Alt> {
        set.iter().max_by_key(|a| self.rank[a.index()])
    }

    /// Induced order over `set`, best first.
    pub fn restrict(&self, set: AltSet) -> Vec<Alt> {
        self.ranking.iter().copied().filter(|a| set.contains(*a)).collect()
    }
}

/// A named finite set of distinct preferences over a common alternative set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    name: String,
    labels: Vec<String>,
    prefs: Vec<Preference>,
}

impl Domain {
    pub fn new(name: impl Into<String>, labels: Vec<String>, prefs: Vec<Preference>) -> Result<Self, DomainError> {
        check_labels(&labels)?;
        let m = labels.len();
        let mut seen: HashMap<&[Alt], usize> = HashMap::new();
        for (i, p) in prefs.iter().enumerate() {
            if p.m() != m {
                return Err(DomainError::NotAPermutation { line: i + 1, m });
            }
            if let Some(first) = seen.insert(p.ranking(), i + 1) {
                return Err(DomainError::DuplicatePreference { line: i + 1, first });
            }
        }
        Ok(Domain {
            name: name.into(),
            labels,
            prefs,
        })
    }

    /// Labels `a1..am` (or the given ones) with prefs from id rankings.
    pub fn from_rankings(name: impl Into<String>, labels: &[&str], rankings: &[&[usize]]) -> Result<Self, DomainError> {
        let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let m = labels.len();
        let prefs = rankings
            .iter()
            .enumerate()
            .map(|(i, r)| {
                Preference::from_indices(r)
                    .filter(|p| p.m() == m)
                    .ok_or(DomainError::NotAPermutation { line: i + 1, m })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Domain::new(name, labels, prefs)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn m(&self) -> usize {
        self.labels.len()
    }

    pub fn len(&self) -> usize {
        self.prefs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefs.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: Alt) -> &str {
        &self.labels[a.index()]
    }

    pub fn alt(&self, label: &str) -> Option<Alt> {
        self.labels.iter().position(|l| l == label).map(Alt::from_index)
    }

    pub fn alternatives(&self) -> impl Iterator<Item = Alt> {
        (0..self.m()).map(Alt::from_index)
    }

    pub fn all(&self) -> AltSet {
        AltSet::full(self.m())
    }

    pub fn prefs(&self) -> &[Preference] {
        &self.prefs
    }

    pub fn pref(&self, i: usize) -> &Preference {
        &self.prefs[i]
    }

    pub fn index_of(&self, p: &Preference) -> Option<usize> {
        self.prefs.iter().position(|q| q == p)
    }

    /// Indices of preferences whose peak is `x` (the set D^x).
    pub fn with_peak(&self, x: Alt) -> impl Iterator<Item = usize> + '_ {
        self.prefs
            .iter()
            .enumerate()
            .filter(move |(_, p)| p.top() == x)
            .map(|(i, _)| i)
    }

    /// Set of peaks that occur in the domain.
    pub fn peak_set(&self) -> AltSet {
        self.prefs.iter().map(Preference::top).collect()
    }

    /// Every alternative is somebody's peak.
    pub fn is_minimally_rich(&self) -> bool {
        self.peak_set() == self.all()
    }

    /// Alternatives second-ranked by some preference peaked at `x`.
    pub fn seconds_set(&self, x: Alt) -> AltSet {
        self.prefs
            .iter()
            .filter(|p| p.top() == x)
            .filter_map(Preference::second)
            .collect()
    }

    /// Union with extra preferences, skipping ones already present.
    pub fn extended(&self, name: impl Into<String>, extra: &[Preference]) -> Self {
        let mut prefs = self.prefs.clone();
        let present: HashSet<Preference> = prefs.iter().cloned().collect();
        prefs.extend(extra.iter().filter(|p| !present.contains(*p)).cloned());
        Domain {
            name: name.into(),
            labels: self.labels.clone(),
            prefs,
        }
    }

    /// Sub-domain keeping the preferences at `indices`, in that order.
    pub fn subdomain(&self, name: impl Into<String>, indices: &[usize]) -> Result<Self, DomainError> {
        Domain::new(
            name,
            self.labels.clone(),
            indices.iter().map(|&i| self.prefs[i].clone()).collect(),
        )
    }

    pub fn format_pref(&self, p: &Preference) -> String {
        p.ranking().iter().map(|a| self.label(*a)).collect::<Vec<_>>().join(" ")
    }

    pub fn format_set(&self, s: AltSet) -> Vec<String> {
        s.iter().map(|a| self.label(a).to_string()).collect()
    }

    /// Domain file text (the line-based format accepted by [`parse_domain`]).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            out.push_str(&format!("# {}\n", self.name));
        }
        out.push_str("alternatives: ");
        out.push_str(&self.labels.join(" "));
        out.push('\n');
        for p in &self.prefs {
            out.push_str("pref: ");
            out.push_str(&self.format_pref(p));
            out.push('\n');
        }
        out
    }
}

fn check_labels(labels: &[String]) -> Result<(), DomainError> {
    if labels.is_empty() {
        return Err(DomainError::EmptyAlternatives);
    }
    if labels.len() > MAX_ALTERNATIVES {
        return Err(DomainError::TooManyAlternatives(labels.len()));
    }
    let mut seen = HashSet::new();
    for l in labels {
        if l.is_empty() {
            return Err(DomainError::EmptyLabel);
        }
        if !seen.insert(l.as_str()) {
            return Err(DomainError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn ranking_from_labels(
    lookup: &HashMap<&str, usize>,
    m: usize,
    line: usize,
    labels: &[&str],
) -> Result<Preference, DomainError> {
    let ids = labels
        .iter()
        .map(|l| {
            lookup.get(l).copied().ok_or_else(|| DomainError::UnknownLabel {
                line,
                label: l.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Preference::from_indices(&ids)
        .filter(|p| p.m() == m)
        .ok_or(DomainError::NotAPermutation { line, m })
}

/// Parses the line-based domain format:
///
/// ```text
/// # comment
/// alternatives: a1 a2 a3
/// pref: a1 a2 a3
/// pref: a3 a2 a1
/// ```
pub fn parse_domain(text: &str, name: &str) -> Result<Domain, DomainError> {
    let mut labels: Option<Vec<String>> = None;
    let mut lookup: HashMap<&str, usize> = HashMap::new();
    let mut prefs = Vec::new();
    let mut first_line: HashMap<Vec<Alt>, usize> = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("alternatives:") {
            if labels.is_some() {
                return Err(DomainError::BadLine {
                    line,
                    text: trimmed.to_string(),
                });
            }
            let ls: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            check_labels(&ls)?;
            labels = Some(ls);
            for (i, l) in rest.split_whitespace().enumerate() {
                lookup.insert(l, i);
            }
        } else if let Some(rest) = trimmed.strip_prefix("pref:") {
            let m = labels.as_ref().ok_or(DomainError::MissingHeader)?.len();
            let toks: Vec<&str> = rest.split_whitespace().collect();
            let p = ranking_from_labels(&lookup, m, line, &toks)?;
            if let Some(&first) = first_line.get(p.ranking()) {
                return Err(DomainError::DuplicatePreference { line, first });
            }
            first_line.insert(p.ranking().to_vec(), line);
            prefs.push(p);
        } else {
            return Err(DomainError::BadLine {
                line,
                text: trimmed.to_string(),
            });
        }
    }
    let labels = labels.ok_or(DomainError::MissingHeader)?;
    if prefs.is_empty() {
        return Err(DomainError::NoPreferences);
    }
    Domain::new(name, labels, prefs)
}

#[derive(Deserialize)]
struct JsonDomain {
    alternatives: Vec<String>,
    prefs: Vec<Vec<String>>,
}

/// Parses `{"alternatives":[...],"prefs":[[...],...]}`.
pub fn parse_domain_json(text: &str, name: &str) -> Result<Domain, DomainError> {
    let raw: JsonDomain = serde_json::from_str(text).map_err(|e| DomainError::Json(e.to_string()))?;
    check_labels(&raw.alternatives)?;
    let m = raw.alternatives.len();
    let lookup: HashMap<&str, usize> = raw
        .alternatives
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let prefs = raw
        .prefs
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let toks: Vec<&str> = r.iter().map(String::as_str).collect();
            ranking_from_labels(&lookup, m, i + 1, &toks)
        })
        .collect::<Result<Vec<_>, _>>()?;
    if prefs.is_empty() {
        return Err(DomainError::NoPreferences);
    }
    Domain::new(name, raw.alternatives, prefs)
}

/// Ordered list of preference indices, one per voter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Profile(pub Vec<usize>);

impl Profile {
    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn peaks(&self, d: &Domain) -> Vec<Alt> {
        self.0.iter().map(|&i| d.pref(i).top()).collect()
    }

    pub fn validate(&self, d: &Domain) -> bool {
        !self.0.is_empty() && self.0.iter().all(|&i| i < d.len())
    }
}
