//! End-to-end domain classification and critical-spot analysis.

use thiserror::Error;

use crate::altset::AltSet;
use crate::budget::{Budget, BudgetExceeded};
use crate::family::{
    certify_hybrid_domain, certify_sh_domain, certify_sp_domain, certify_ssp_domain, is_ssp_pref, Certification,
    DomainCertificate, FamilyKind,
};
use crate::pref::{Alt, Domain, Profile};
use crate::rules::{
    check_axioms, dictator_on_table, make_almost_dictatorship, make_hybrid, make_pnt, make_projection,
    non_dictatorship_witnesses, Axiom, AxiomResult, OutcomeTable, RuleError, Scf,
};
use crate::structure::{check_unidimensional, RichnessReport, TooFewAlternatives};
use crate::tree::Tree;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    TooFew(#[from] TooFewAlternatives),
    #[error("domain is not minimally rich")]
    NotMinimallyRich,
    #[error("rule verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Taxonomy {
    NotUnidimensional,
    Dictatorial,
    SemiSinglePeaked(DomainCertificate),
    SemiHybrid { cert: DomainCertificate, degenerate: bool },
    Inconclusive(String),
}

impl Taxonomy {
    pub fn name(&self) -> &'static str {
        match self {
            Taxonomy::NotUnidimensional => "not_unidimensional",
            Taxonomy::Dictatorial => "dictatorial",
            Taxonomy::SemiSinglePeaked(_) => "semi_single_peaked",
            Taxonomy::SemiHybrid { .. } => "semi_hybrid",
            Taxonomy::Inconclusive(_) => "inconclusive",
        }
    }
}

/// A rule built by the classifier together with its verification results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructedRule {
    pub role: RuleRole,
    pub scf: Scf,
    pub results: Vec<AxiomResult>,
    /// Voter dictating on the free zone, for hybrid rules.
    pub free_zone_dictator: Option<Option<usize>>,
    /// Per voter, a profile where the outcome is not that voter's peak.
    pub non_dictatorship: Option<Vec<Option<Profile>>>,
}

impl ConstructedRule {
    pub fn result(&self, axiom: Axiom) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.axiom == axiom)
    }

    pub fn holds(&self, axiom: Axiom) -> Option<bool> {
        self.result(axiom).map(|r| r.holds)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleRole {
    AlmostDictatorship,
    Projection,
    Hybrid,
}

impl RuleRole {
    pub fn name(self) -> &'static str {
        match self {
            RuleRole::AlmostDictatorship => "almost_dictatorship",
            RuleRole::Projection => "projection",
            RuleRole::Hybrid => "hybrid",
        }
    }
}

/// Oriented tree edge `(x, y)` meeting all three critical-spot conditions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CriticalSpot {
    pub x: Alt,
    pub y: Alt,
    /// Two preferences with a common peak on the `y` side that disagree on
    /// `x` versus `y`.
    pub witnesses: (usize, usize),
}

/// Family certifications run on domains that are not unidimensional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Advisory {
    pub sp: Certification,
    pub ssp: Certification,
    pub hybrid: Certification,
    pub sh: Certification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub richness: RichnessReport,
    pub usp: Option<(Alt, Alt)>,
    pub taxonomy: Taxonomy,
    pub constructed_rules: Vec<ConstructedRule>,
    /// Tree the spots refer to.
    pub spot_tree: Option<Tree>,
    pub critical_spots: Vec<CriticalSpot>,
    pub advisory: Option<Advisory>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self.taxonomy, Taxonomy::Inconclusive(_))
    }

    pub fn rule(&self, role: RuleRole) -> Option<&ConstructedRule> {
        self.constructed_rules.iter().find(|r| r.role == role)
    }
}

const ALL_AXIOMS: [Axiom; 5] = [
    Axiom::Unanimity,
    Axiom::StrategyProof,
    Axiom::TopsOnly,
    Axiom::Anonymity,
    Axiom::Invariance,
];

pub fn classify(d: &Domain, budget: &Budget) -> Result<Verdict, ClassifyError> {
    let richness = check_unidimensional(d)?;
    let usp = richness.unique_seconds_witness;
    let mut v = Verdict {
        richness,
        usp,
        taxonomy: Taxonomy::NotUnidimensional,
        constructed_rules: Vec::new(),
        spot_tree: None,
        critical_spots: Vec::new(),
        advisory: None,
        notes: Vec::new(),
    };
    if !v.richness.unidimensional {
        v.advisory = Some(Advisory {
            sp: certify_sp_domain(d, budget),
            ssp: certify_ssp_domain(d, budget),
            hybrid: certify_hybrid_domain(d, budget),
            sh: certify_sh_domain(d, budget),
        });
        return Ok(v);
    }
    match classify_unidimensional(d, &mut v, budget) {
        Ok(()) => Ok(v),
        Err(ClassifyError::Budget(e)) | Err(ClassifyError::Rule(RuleError::Budget(e))) => {
            v.taxonomy = Taxonomy::Inconclusive(e.to_string());
            Ok(v)
        }
        Err(e) => Err(e),
    }
}

fn classify_unidimensional(d: &Domain, v: &mut Verdict, budget: &Budget) -> Result<(), ClassifyError> {
    let Some((x, y)) = v.usp else {
        v.taxonomy = Taxonomy::Dictatorial;
        return Ok(());
    };
    let ad = make_almost_dictatorship(x, y, 0, 1, 2)?;
    v.constructed_rules.push(verify(
        RuleRole::AlmostDictatorship,
        ad,
        d,
        &[Axiom::Unanimity, Axiom::StrategyProof, Axiom::TopsOnly],
        None,
        budget,
    )?);

    let cert = match certify_ssp_domain(d, budget) {
        Certification::Certified(c) => Some(c),
        Certification::Inconclusive { reason } => {
            v.taxonomy = Taxonomy::Inconclusive(reason);
            return Ok(());
        }
        Certification::Absent { .. } => None,
    };
    if let Some(cert) = cert {
        let threshold = cert.valid_thresholds[0];
        let f = make_projection(cert.kind.tree().clone(), threshold, 2)?;
        v.constructed_rules
            .push(verify(RuleRole::Projection, f, d, &ALL_AXIOMS, None, budget)?);
        spots_on(d, cert.kind.tree(), v, budget)?;
        v.taxonomy = Taxonomy::SemiSinglePeaked(cert);
        return Ok(());
    }

    match certify_sh_domain(d, budget) {
        Certification::Certified(cert) => {
            let FamilyKind::Sh { tree, a, b } = &cert.kind else {
                unreachable!("semi-hybrid certificate carries semi-hybrid parameters")
            };
            let free = tree.interval(*a, *b);
            match make_hybrid(tree.clone(), *a, *b, 0, 2) {
                Ok(f) => {
                    v.constructed_rules.push(verify(
                        RuleRole::Hybrid,
                        f,
                        d,
                        &[
                            Axiom::Unanimity,
                            Axiom::StrategyProof,
                            Axiom::TopsOnly,
                            Axiom::Anonymity,
                            Axiom::Invariance,
                        ],
                        Some(free),
                        budget,
                    )?);
                }
                Err(RuleError::FreeZoneTooSmall(k)) => v
                    .notes
                    .push(format!("free zone has {k} alternatives; no hybrid rule constructed")),
                Err(e) => return Err(e.into()),
            }
            v.notes
                .push("dictatorship verified on the free zone only, not on a larger superset".to_string());
            spots_on(d, tree, v, budget)?;
            let degenerate = cert.degenerate.unwrap_or(false);
            v.taxonomy = Taxonomy::SemiHybrid { cert, degenerate };
        }
        Certification::Inconclusive { reason } => v.taxonomy = Taxonomy::Inconclusive(reason),
        Certification::Absent { .. } => {
            v.taxonomy = Taxonomy::Inconclusive(
                "unidimensional non-dictatorial domain with neither a semi-single-peaked nor a semi-hybrid certificate"
                    .to_string(),
            )
        }
    }
    Ok(())
}

fn spots_on(d: &Domain, t: &Tree, v: &mut Verdict, budget: &Budget) -> Result<(), ClassifyError> {
    if d.is_minimally_rich() {
        v.critical_spots = find_critical_spots(d, t, budget)?;
        v.spot_tree = Some(t.clone());
    }
    Ok(())
}

fn verify(
    role: RuleRole,
    scf: Scf,
    d: &Domain,
    axioms: &[Axiom],
    free_zone: Option<AltSet>,
    budget: &Budget,
) -> Result<ConstructedRule, ClassifyError> {
    let results = check_axioms(&scf, d, axioms, budget)?;
    let table = OutcomeTable::build(&scf, d, &Budget::unlimited())?;
    let free_zone_dictator = free_zone.map(|z| dictator_on_table(&table, d, z));
    let non_dictatorship = (role == RuleRole::AlmostDictatorship).then(|| non_dictatorship_witnesses(&table, d));
    Ok(ConstructedRule {
        role,
        scf,
        results,
        free_zone_dictator,
        non_dictatorship,
    })
}

/// Every oriented edge of `t` meeting the three critical-spot conditions,
/// edges in canonical order, `(u, v)` before `(v, u)`.
pub fn find_critical_spots(d: &Domain, t: &Tree, budget: &Budget) -> Result<Vec<CriticalSpot>, ClassifyError> {
    if !d.is_minimally_rich() {
        return Err(ClassifyError::NotMinimallyRich);
    }
    if t.m() != d.m() {
        return Err(RuleError::SizeMismatch {
            rule: t.m(),
            domain: d.m(),
        }
        .into());
    }
    let edges = t.edges();
    budget.charge_product(&[2 * edges.len() as u64, d.len() as u64, d.m() as u64])?;
    Ok(edges
        .into_iter()
        .flat_map(|(u, v)| [(u, v), (v, u)])
        .filter_map(|(x, y)| spot_at(d, t, x, y))
        .collect())
}

fn spot_at(d: &Domain, t: &Tree, x: Alt, y: Alt) -> Option<CriticalSpot> {
    let x_side = t.side_set_unchecked(x, y);
    let prefs = d.prefs();
    let cond_i = prefs
        .iter()
        .filter(|p| x_side.contains(p.top()))
        .all(|p| is_ssp_pref(p, t, y));
    let cond_ii = prefs
        .iter()
        .filter(|p| !x_side.contains(p.top()))
        .all(|p| p.best_in(x_side) == Some(x));
    if !(cond_i && cond_ii) {
        return None;
    }
    let witnesses = (0..prefs.len()).find_map(|i| {
        let p = &prefs[i];
        if x_side.contains(p.top()) {
            return None;
        }
        (i + 1..prefs.len())
            .find(|&j| prefs[j].top() == p.top() && prefs[j].prefers(x, y) != p.prefers(x, y))
            .map(|j| (i, j))
    })?;
    Some(CriticalSpot { x, y, witnesses })
}

/// Both sides of the critical-spot characterisation for a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Prop1Check {
    /// The domain leaves the smaller family (single-peaked or hybrid).
    pub outside: bool,
    /// A qualifying critical spot exists.
    pub spot: bool,
}

impl Prop1Check {
    pub fn holds(&self) -> bool {
        self.outside == self.spot
    }
}

pub fn verify_prop1(d: &Domain, cert: &DomainCertificate, budget: &Budget) -> Result<Prop1Check, ClassifyError> {
    let tree = cert.kind.tree();
    let spots = find_critical_spots(d, tree, budget)?;
    Ok(match &cert.kind {
        FamilyKind::Sp { .. } | FamilyKind::Ssp { .. } => Prop1Check {
            outside: !FamilyKind::sp(tree.clone()).contains_domain(d),
            spot: !spots.is_empty(),
        },
        FamilyKind::Sh { a, b, .. } | FamilyKind::Hybrid { a, b, .. } => {
            let sa = tree.side_set_unchecked(*a, *b).without(*a);
            let sb = tree.side_set_unchecked(*b, *a).without(*b);
            let hybrid =
                FamilyKind::hybrid(tree.clone(), *a, *b).map_err(|e| ClassifyError::Verification(e.to_string()))?;
            Prop1Check {
                outside: !hybrid.contains_domain(d),
                spot: spots
                    .iter()
                    .any(|s| (sa.contains(s.x) && sa.contains(s.y)) || (sb.contains(s.x) && sb.contains(s.y))),
            }
        }
    })
}

/// PNT rule on a critical spot, checked to be unanimous and strategy-proof
/// but not tops-only.
pub fn build_verified_pnt(
    d: &Domain,
    t: &Tree,
    spot: &CriticalSpot,
    i: usize,
    j: usize,
    n: usize,
    budget: &Budget,
) -> Result<(Scf, Vec<AxiomResult>), ClassifyError> {
    let f = make_pnt(t.clone(), spot.x, spot.y, i, j, n)?;
    let results = check_axioms(
        &f,
        d,
        &[Axiom::Unanimity, Axiom::StrategyProof, Axiom::TopsOnly],
        budget,
    )?;
    let expect = [true, true, false];
    if let Some(r) = results.iter().zip(expect).find(|(r, e)| r.holds != *e) {
        return Err(ClassifyError::Verification(format!(
            "{} expected {} at spot ({}, {})",
            r.0.axiom.name(),
            if r.1 { "to hold" } else { "to fail" },
            d.label(spot.x),
            d.label(spot.y)
        )));
    }
    Ok((f, results))
}
