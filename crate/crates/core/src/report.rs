//! JSON reports with alternatives written as labels.
//!
//! Preferences are referred to by their 0-based position in the domain file,
//! voters by 0-based index.

use serde_json::{json, Map, Value};

use crate::altset::AltSet;
use crate::classify::{Advisory, ConstructedRule, CriticalSpot, Taxonomy, Verdict};
use crate::enumerate::Decomposition;
use crate::family::{Certification, DomainCertificate, FamilyKind};
use crate::pref::{Alt, Domain};
use crate::rules::{AxiomResult, RuleSpec, Scf, ScfBody, Witness};
use crate::structure::RichnessReport;
use crate::tree::{Graph, Tree};

pub const SCHEMA_VERSION: u32 = 1;

/// Witness fields holding an alternative.
const ALT_FIELDS: [&str; 6] = [
    "peak",
    "outcome",
    "deviated_outcome",
    "first_outcome",
    "second_outcome",
    "swapped_outcome",
];

pub fn envelope(command: &str, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema_version".into(), json!(SCHEMA_VERSION));
    out.insert("command".into(), json!(command));
    if let Value::Object(fields) = body {
        out.extend(fields);
    }
    Value::Object(out)
}

fn l(d: &Domain, a: Alt) -> Value {
    json!(d.label(a))
}

fn set(d: &Domain, s: AltSet) -> Value {
    json!(d.format_set(s))
}

pub fn edges_json(d: &Domain, g: &Graph) -> Value {
    Value::Array(
        g.edges()
            .into_iter()
            .map(|(a, b)| json!([d.label(a), d.label(b)]))
            .collect(),
    )
}

pub fn tree_json(d: &Domain, t: &Tree) -> Value {
    edges_json(d, t.graph())
}

pub fn richness_json(d: &Domain, r: &RichnessReport) -> Value {
    let leaves: Vec<Value> = r
        .leaf_symmetry
        .leaves
        .iter()
        .map(|c| {
            json!({
                "leaf": l(d, c.leaf),
                "seconds": set(d, c.seconds),
                "applies": c.applies,
                "witness": c.witness.map(|z| l(d, z)),
                "ok": c.ok(),
            })
        })
        .collect();
    json!({
        "minimally_rich": r.minimally_rich,
        "path_connected": r.path_connected,
        "diversity_witness": r.diversity_witness.map(|(i, j)| json!([i, j])),
        "leaf_symmetry": {
            "holds": r.leaf_symmetry.holds,
            "violations": r.leaf_symmetry.violations().into_iter().map(|a| d.label(a).to_string()).collect::<Vec<_>>(),
            "leaves": leaves,
        },
        "unique_seconds": r.unique_seconds_witness.map(|(x, y)| json!([d.label(x), d.label(y)])),
        "linked": r.linked,
        "unidimensional": r.unidimensional,
    })
}

pub fn family_kind_json(d: &Domain, k: &FamilyKind) -> Value {
    let mut v = json!({ "family": k.family().name(), "tree": tree_json(d, k.tree()) });
    match k {
        FamilyKind::Ssp { threshold, .. } => v["threshold"] = l(d, *threshold),
        FamilyKind::Hybrid { a, b, .. } | FamilyKind::Sh { a, b, .. } => {
            v["thresholds"] = json!([d.label(*a), d.label(*b)])
        }
        FamilyKind::Sp { .. } => {}
    }
    v
}

pub fn certificate_json(d: &Domain, c: &DomainCertificate) -> Value {
    let k = &c.conditions;
    json!({
        "kind": family_kind_json(d, &c.kind),
        "valid_thresholds": c.valid_thresholds.iter().map(|&a| d.label(a).to_string()).collect::<Vec<_>>(),
        "free_zone": c.free_zone.map(|z| set(d, z)),
        "degenerate": c.degenerate,
        "conditions": {
            "cover": k.cover,
            "connected": k.connected,
            "minimal": k.minimal,
            "third": k.third,
            "third_vacuous": k.third_vacuous,
            "failing_leaves": k.failing_leaves.iter().map(|&a| d.label(a).to_string()).collect::<Vec<_>>(),
        },
    })
}

pub fn certification_json(d: &Domain, c: &Certification) -> Value {
    match c {
        Certification::Certified(cert) => json!({ "status": c.status(), "certificate": certificate_json(d, cert) }),
        Certification::Absent { candidate } => json!({
            "status": c.status(),
            "candidate": candidate.as_ref().map(|x| certificate_json(d, x)),
        }),
        Certification::Inconclusive { reason } => json!({ "status": c.status(), "reason": reason }),
    }
}

pub fn witness_json(d: &Domain, w: &Witness) -> Value {
    let mut v = serde_json::to_value(w).expect("witness serialises");
    if let Value::Object(fields) = &mut v {
        for key in ALT_FIELDS {
            if let Some(slot) = fields.get_mut(key) {
                let a = Alt::from_index(slot.as_u64().expect("alternative id") as usize);
                *slot = l(d, a);
            }
        }
    }
    v
}

/// Inverse of [`witness_json`].
pub fn witness_from_json(d: &Domain, v: &Value) -> Result<Witness, String> {
    let mut v = v.clone();
    if let Value::Object(fields) = &mut v {
        for key in ALT_FIELDS {
            if let Some(slot) = fields.get_mut(key) {
                let label = slot.as_str().ok_or_else(|| format!("`{key}` is not a label"))?;
                let a = d.alt(label).ok_or_else(|| format!("unknown alternative `{label}`"))?;
                *slot = json!(a.0);
            }
        }
    }
    serde_json::from_value(v).map_err(|e| e.to_string())
}

pub fn axiom_result_json(d: &Domain, r: &AxiomResult) -> Value {
    json!({
        "axiom": r.axiom.name(),
        "holds": r.holds,
        "witness": r.witness.as_ref().map(|w| witness_json(d, w)),
    })
}

pub fn scf_json(d: &Domain, f: &Scf) -> Value {
    match RuleSpec::describe(f, d) {
        Some(spec) => {
            let mut v = serde_json::to_value(spec).expect("rule spec serialises");
            if let ScfBody::Hybrid { tree, a, b, .. } = f.body() {
                v["free_zone"] = set(d, tree.interval(*a, *b));
            }
            v
        }
        None => json!({ "kind": f.kind_name(), "n": f.n() }),
    }
}

/// Peak table as an m × m label matrix (`null` for pairs that never occur).
pub fn peak_table_json(d: &Domain, f: &Scf) -> Option<Value> {
    match f.body() {
        ScfBody::PeakTable { m, table } => Some(Value::Array(
            table
                .chunks(*m)
                .map(|row| Value::Array(row.iter().map(|c| c.map_or(Value::Null, |a| l(d, a))).collect()))
                .collect(),
        )),
        _ => None,
    }
}

fn constructed_json(d: &Domain, r: &ConstructedRule) -> Value {
    let mut v = json!({
        "role": r.role.name(),
        "rule": scf_json(d, &r.scf),
        "results": r.results.iter().map(|x| axiom_result_json(d, x)).collect::<Vec<_>>(),
    });
    if let Some(z) = r.free_zone_dictator {
        v["free_zone_dictator"] = json!(z);
    }
    if let Some(w) = &r.non_dictatorship {
        v["non_dictatorship_witnesses"] = json!(w);
    }
    v
}

pub fn spots_json(d: &Domain, spots: &[CriticalSpot]) -> Value {
    Value::Array(
        spots
            .iter()
            .map(|s| json!({ "edge": [d.label(s.x), d.label(s.y)], "witnesses": [s.witnesses.0, s.witnesses.1] }))
            .collect(),
    )
}

fn advisory_json(d: &Domain, a: &Advisory) -> Value {
    json!({
        "sp": certification_json(d, &a.sp),
        "ssp": certification_json(d, &a.ssp),
        "hybrid": certification_json(d, &a.hybrid),
        "sh": certification_json(d, &a.sh),
    })
}

pub fn verdict_json(d: &Domain, v: &Verdict) -> Value {
    let taxonomy = match &v.taxonomy {
        Taxonomy::SemiSinglePeaked(c) => json!({ "class": v.taxonomy.name(), "certificate": certificate_json(d, c) }),
        Taxonomy::SemiHybrid { cert, degenerate } => json!({
            "class": v.taxonomy.name(),
            "certificate": certificate_json(d, cert),
            "degenerate": degenerate,
        }),
        Taxonomy::Inconclusive(reason) => json!({ "class": v.taxonomy.name(), "reason": reason }),
        _ => json!({ "class": v.taxonomy.name() }),
    };
    json!({
        "domain": d.name(),
        "richness": richness_json(d, &v.richness),
        "unique_seconds": v.usp.map(|(x, y)| json!([d.label(x), d.label(y)])),
        "taxonomy": taxonomy,
        "constructed_rules": v.constructed_rules.iter().map(|r| constructed_json(d, r)).collect::<Vec<_>>(),
        "spot_tree": v.spot_tree.as_ref().map(|t| tree_json(d, t)),
        "critical_spots": spots_json(d, &v.critical_spots),
        "advisory": v.advisory.as_ref().map(|a| advisory_json(d, a)),
        "notes": v.notes,
    })
}

pub fn decomposition_json(d: &Domain, dec: &Decomposition) -> Value {
    match dec {
        Decomposition::Dictatorship(v) => json!({ "tag": dec.tag(), "voter": v }),
        Decomposition::Projection(ps) => json!({
            "tag": dec.tag(),
            "matches": ps.iter().map(|(t, x)| json!({ "tree": tree_json(d, t), "threshold": d.label(*x) })).collect::<Vec<_>>(),
        }),
        Decomposition::Hybrid(hs) => json!({
            "tag": dec.tag(),
            "matches": hs
                .iter()
                .map(|(t, a, b, v)| json!({
                    "tree": tree_json(d, t),
                    "thresholds": [d.label(*a), d.label(*b)],
                    "voter": v,
                    "free_zone": set(d, t.interval(*a, *b)),
                }))
                .collect::<Vec<_>>(),
        }),
        Decomposition::Other => json!({ "tag": dec.tag() }),
    }
}
