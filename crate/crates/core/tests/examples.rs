//! Worked examples for individual operations, checked against the fixtures
//! and against the brute-force helpers in `common`.

mod common;

use std::collections::BTreeSet;

use domainlab::enumerate::{decompose_rule, enum_all_sp_rules_micro, enum_topsonly_sp_rules, Decomposition};
use domainlab::family::{
    certify_hybrid_domain, certify_sh_domain, certify_sp_domain, certify_ssp_domain, default_labels, gen_family,
    is_hybrid_pref, is_sh_pref, is_sp_pref, is_ssp_pref, universal_domain, Certification, FamilyKind, DEFAULT_GEN_CAP,
};
use domainlab::pref::{parse_domain, DomainError, Profile};
use domainlab::rules::{
    check_anonymity, check_invariance, check_strategy_proof, check_tops_only, check_unanimity, dictator_on,
    make_almost_dictatorship, make_dictatorship, make_full_table, make_hybrid, make_pnt, make_projection, OutcomeTable,
    RuleError, Scf,
};
use domainlab::structure::{
    adjacency_graph, check_diversity, check_leaf_symmetry, check_path_connected, check_unidimensional, unique_seconds,
    weak_adjacency_graph,
};
use domainlab::tree::{enumerate_trees, Graph};
use domainlab::{fixtures, Alt, AltSet, Budget, Domain, Tree};

use common::*;

fn alt(d: &Domain, l: &str) -> Alt {
    d.alt(l).unwrap_or_else(|| panic!("no alternative {l}"))
}

fn set(d: &Domain, ls: &[&str]) -> AltSet {
    ls.iter().fold(AltSet::default(), |s, l| s.with(alt(d, l)))
}

fn tree_alt(labels: &[String], l: &str) -> Alt {
    Alt::from_index(labels.iter().position(|x| x == l).unwrap())
}

fn tree_set(labels: &[String], ls: &[&str]) -> AltSet {
    ls.iter().fold(AltSet::default(), |s, l| s.with(tree_alt(labels, l)))
}

fn a(i: usize) -> Alt {
    Alt::from_index(i)
}

fn gen(kind: FamilyKind) -> Domain {
    let m = kind.tree().m();
    gen_family(&kind, &default_labels(m), DEFAULT_GEN_CAP).unwrap()
}

fn universal(m: usize) -> Domain {
    universal_domain(&default_labels(m), DEFAULT_GEN_CAP).unwrap()
}

fn edges_of(g: &Graph) -> BTreeSet<(usize, usize)> {
    g.edges()
        .into_iter()
        .map(|(x, y)| (x.index().min(y.index()), x.index().max(y.index())))
        .collect()
}

fn budget() -> Budget {
    Budget::default()
}

/// First preference in `d` with the given ranking prefix.
fn pref_starting(d: &Domain, prefix: &[usize]) -> usize {
    (0..d.len())
        .find(|&i| d.pref(i).ranking().iter().zip(prefix).all(|(x, &y)| x.index() == y))
        .unwrap()
}

fn outcome_vec(f: &Scf, d: &Domain) -> Vec<usize> {
    let t = OutcomeTable::build(f, d, &Budget::unlimited()).unwrap();
    (0..t.len()).map(|i| t.at(i).index()).collect()
}

// preferences and domains

#[test]
fn parse_table_one() {
    let d = fixtures::d1();
    assert_eq!((d.m(), d.len()), (6, 12));
}

#[test]
fn parse_single_alternative() {
    let d = parse_domain("alternatives: a1\npref: a1\n", "one").unwrap();
    assert_eq!((d.m(), d.len()), (1, 1));
}

#[test]
fn parse_rejects_repeated_line() {
    let err = parse_domain("alternatives: a b\npref: a b\npref: a b\n", "dup").unwrap_err();
    assert!(matches!(err, DomainError::DuplicatePreference { .. }), "{err:?}");
}

#[test]
fn ranks_read_off_the_tables() {
    let d1 = fixtures::d1();
    assert_eq!(d1.pref(0).rank_of(alt(&d1, "a3")), 3);
    for p in d1.prefs() {
        assert_eq!(p.rank_of(p.top()), 1);
    }
    let d3 = fixtures::d3();
    assert_eq!(d3.pref(8).rank_of(alt(&d3, "a")), 4);
}

#[test]
fn complete_reversals() {
    let d = fixtures::d1();
    assert!(d.pref(0).is_complete_reversal(d.pref(11)));
    assert!(!d.pref(0).is_complete_reversal(d.pref(0)));
    assert!(!d.pref(0).is_complete_reversal(d.pref(1)));
    let rs = rankings(&d);
    let naive = |i: usize, j: usize| rs[i].iter().rev().eq(rs[j].iter());
    for i in 0..d.len() {
        for j in 0..d.len() {
            assert_eq!(d.pref(i).is_complete_reversal(d.pref(j)), naive(i, j));
        }
    }
}

#[test]
fn best_in_subsets() {
    let d1 = fixtures::d1();
    assert_eq!(d1.pref(1).best_in(set(&d1, &["a3", "a4", "a5"])), Some(alt(&d1, "a5")));
    assert_eq!(d1.pref(1).best_in(set(&d1, &["a4"])), Some(alt(&d1, "a4")));
    let d4 = fixtures::d4();
    assert_eq!(d4.pref(8).best_in(set(&d4, &["a1", "a2"])), Some(alt(&d4, "a2")));
}

#[test]
fn restriction() {
    let d = fixtures::d1();
    let p = d.pref(1);
    let b = set(&d, &["a1", "a2", "a3"]);
    let naive: Vec<usize> = rankings(&d)[1].iter().copied().filter(|&x| b.contains(a(x))).collect();
    assert_eq!(p.restrict(b).iter().map(|x| x.index()).collect::<Vec<_>>(), naive);
    assert_eq!(p.restrict(b), vec![alt(&d, "a1"), alt(&d, "a2"), alt(&d, "a3")]);
    assert_eq!(p.restrict(d.all()), p.ranking().to_vec());
    assert_eq!(p.restrict(set(&d, &["a6"])), vec![alt(&d, "a6")]);
}

#[test]
fn seconds_sets() {
    let d3 = fixtures::d3();
    assert_eq!(d3.seconds_set(alt(&d3, "a")), set(&d3, &["b", "d"]));
    let d4 = fixtures::d4();
    assert_eq!(d4.seconds_set(alt(&d4, "a4")), set(&d4, &["a3"]));
    let one = d4.subdomain("one", &[0]).unwrap();
    let p = one.pref(0);
    assert_eq!(one.seconds_set(p.top()), AltSet::single(p.second().unwrap()));
}

// trees

#[test]
fn paths() {
    let (l, t) = fixtures::line6();
    let p = t.path(tree_alt(&l, "a2"), tree_alt(&l, "a5"));
    assert_eq!(p, ["a2", "a3", "a4", "a5"].map(|x| tree_alt(&l, x)).to_vec());
    for x in 0..6 {
        assert_eq!(t.path(a(x), a(x)), vec![a(x)]);
    }
    let (s, star) = fixtures::star4();
    assert_eq!(
        star.path(tree_alt(&s, "a"), tree_alt(&s, "d")),
        ["a", "b", "d"].map(|x| tree_alt(&s, x)).to_vec()
    );
}

#[test]
fn projections() {
    let (l, t) = fixtures::line6();
    let b = tree_set(&l, &["a3", "a4", "a5"]);
    assert_eq!(t.project(tree_alt(&l, "a1"), b).unwrap(), tree_alt(&l, "a3"));
    assert_eq!(t.project(tree_alt(&l, "a4"), b).unwrap(), tree_alt(&l, "a4"));
    let (s, star) = fixtures::star4();
    let ab = tree_set(&s, &["a", "b"]);
    assert_eq!(star.project(tree_alt(&s, "c"), ab).unwrap(), tree_alt(&s, "b"));

    let dist = distances(4, &edges_usize(&star));
    let members: Vec<usize> = ab.iter().map(|x| x.index()).collect();
    for z in 0..4 {
        assert_eq!(star.project(a(z), ab).unwrap().index(), project(&dist, z, &members));
    }
}

fn edges_usize(t: &Tree) -> Vec<(usize, usize)> {
    t.edges().into_iter().map(|(x, y)| (x.index(), y.index())).collect()
}

#[test]
fn minimal_subtrees() {
    let (l, t) = fixtures::line6();
    assert_eq!(
        t.minimal_subtree(&[tree_alt(&l, "a1"), tree_alt(&l, "a6")]),
        AltSet::full(6)
    );
    assert_eq!(t.minimal_subtree(&[tree_alt(&l, "a3")]), tree_set(&l, &["a3"]));
    let (s, star) = fixtures::star4();
    let peaks = ["a", "c", "d"].map(|x| tree_alt(&s, x));
    assert_eq!(star.minimal_subtree(&peaks), AltSet::full(4));
}

#[test]
fn side_sets() {
    let (l, t) = fixtures::line6();
    assert_eq!(
        t.side_set(tree_alt(&l, "a2"), tree_alt(&l, "a5")).unwrap(),
        tree_set(&l, &["a1", "a2"])
    );
    assert_eq!(
        t.side_set(tree_alt(&l, "a1"), tree_alt(&l, "a2")).unwrap(),
        tree_set(&l, &["a1"])
    );

    // a's side holds a and everything hanging off it, including x
    let (sl, sp) = fixtures::spine25();
    let (x, y) = (tree_alt(&sl, "a"), tree_alt(&sl, "b"));
    let dist = distances(sp.m(), &edges_usize(&sp));
    let naive: AltSet = (0..sp.m())
        .filter(|&z| on_path(&dist, z, y.index(), x.index()))
        .map(a)
        .collect();
    assert_eq!(sp.side_set(x, y).unwrap(), naive);
    assert!(naive.contains(tree_alt(&sl, "x")));
    assert!(!naive.contains(tree_alt(&sl, "y")));
}

#[test]
fn dual_thresholds() {
    let (sl, sp) = fixtures::spine25();
    for (u, v) in sp.edges() {
        assert!(sp.is_dual_thresholds(u, v).unwrap());
    }
    assert!(!sp.is_dual_thresholds(tree_alt(&sl, "x"), tree_alt(&sl, "y")).unwrap());
    let (l, t) = fixtures::line6();
    assert!(t.is_dual_thresholds(tree_alt(&l, "a1"), tree_alt(&l, "a6")).unwrap());
}

#[test]
fn leaves() {
    let d1 = fixtures::d1();
    assert_eq!(adjacency_graph(&d1).leaves(), set(&d1, &["a1", "a3", "a6"]));
    let cycle = Graph::from_edges(4, [(a(0), a(1)), (a(1), a(2)), (a(2), a(3)), (a(3), a(0))]);
    assert!(cycle.leaves().is_empty());
    let (s, star) = fixtures::star4();
    assert_eq!(star.leaves(), tree_set(&s, &["a", "c", "d"]));
}

#[test]
fn tree_counts() {
    for (m, count) in [(2, 1), (3, 3), (4, 16)] {
        assert_eq!(enumerate_trees(m, 1000).unwrap().count(), count);
    }
}

// domain structure

#[test]
fn adjacency_graphs() {
    let d1 = fixtures::d1();
    let (_, fig) = fixtures::d1_adjacency();
    assert_eq!(edges_of(&adjacency_graph(&d1)), edges_of(fig.graph()));

    let d2 = fixtures::d2();
    let abc = set(&d2, &["a", "b", "c"]);
    let xyz = set(&d2, &["x", "y", "z"]);
    let mut triangles = BTreeSet::new();
    for s in [abc, xyz] {
        let v: Vec<Alt> = s.iter().collect();
        for i in 0..3 {
            for j in i + 1..3 {
                triangles.insert((v[i].index(), v[j].index()));
            }
        }
    }
    assert_eq!(edges_of(&adjacency_graph(&d2)), triangles);

    let d4 = fixtures::d4();
    let (_, g4) = fixtures::d4_adjacency();
    assert_eq!(edges_of(&adjacency_graph(&d4)), edges_of(&g4));

    for d in [d1, d2, d4] {
        assert_eq!(edges_of(&adjacency_graph(&d)), naive_adjacency(&rankings(&d)));
    }
}

#[test]
fn weak_adjacency() {
    let d1 = fixtures::d1();
    assert!(edges_of(&adjacency_graph(&d1)).is_subset(&edges_of(&weak_adjacency_graph(&d1))));
    let one = d1.subdomain("one", &[0]).unwrap();
    assert_eq!(weak_adjacency_graph(&one).edge_count(), 0);
    let d3 = fixtures::d3();
    let rs = rankings(&d3);
    let mut naive = BTreeSet::new();
    for p in &rs {
        for q in &rs {
            if p[0] == q[1] && p[1] == q[0] {
                naive.insert((p[0].min(p[1]), p[0].max(p[1])));
            }
        }
    }
    assert_eq!(edges_of(&weak_adjacency_graph(&d3)), naive);
    // a is only ever second under b and c, so no a-d swap exists
    assert!(!weak_adjacency_graph(&d3).has_edge(alt(&d3, "a"), alt(&d3, "d")));
}

#[test]
fn path_connectedness() {
    assert!(check_path_connected(&fixtures::d1()));
    assert!(!check_path_connected(&fixtures::d2()));
    let single = parse_domain("alternatives: a1\npref: a1\n", "one").unwrap();
    assert!(check_path_connected(&single));
}

#[test]
fn diversity_witnesses() {
    assert_eq!(check_diversity(&fixtures::d1()), Some((0, 11)));
    assert_eq!(check_diversity(&fixtures::d3()), Some((0, 8)));
    let one = fixtures::d1().subdomain("one", &[0]).unwrap();
    assert_eq!(check_diversity(&one), None);
}

#[test]
fn leaf_symmetry() {
    let d3 = fixtures::d3();
    let ls = check_leaf_symmetry(&d3);
    assert!(!ls.holds);
    assert!(ls.violations().contains(&alt(&d3, "a")));
    let naive = naive_leaf_symmetry_violations(&rankings(&d3), d3.m());
    assert_eq!(ls.violations().iter().map(|x| x.index()).collect::<Vec<_>>(), naive);
    assert!(check_leaf_symmetry(&fixtures::d1()).holds);
    assert!(check_leaf_symmetry(&fixtures::d4()).holds);
}

#[test]
fn unique_seconds_witnesses() {
    let d4 = fixtures::d4();
    assert_eq!(unique_seconds(&d4), Some((alt(&d4, "a4"), alt(&d4, "a3"))));
    assert_eq!(unique_seconds(&fixtures::d3()), None);
    let d1 = fixtures::d1();
    assert_eq!(unique_seconds(&d1), Some((alt(&d1, "a1"), alt(&d1, "a2"))));
}

#[test]
fn unidimensionality() {
    assert!(check_unidimensional(&fixtures::d1()).unwrap().unidimensional);
    let r2 = check_unidimensional(&fixtures::d2()).unwrap();
    assert!(!r2.unidimensional && !r2.path_connected);
    let r3 = check_unidimensional(&fixtures::d3()).unwrap();
    assert!(!r3.unidimensional && !r3.leaf_symmetry.holds);
}

// preference families

#[test]
fn single_peaked_on_the_line() {
    let d = fixtures::d1();
    let (_, t) = fixtures::line6();
    let dist = distances(6, &edges_usize(&t));
    assert!(is_sp_pref(d.pref(0), &t));
    assert!(!is_sp_pref(d.pref(1), &t));
    for (i, r) in rankings(&d).iter().enumerate() {
        assert_eq!(is_sp_pref(d.pref(i), &t), naive_sp(r, &dist));
    }
    let declining = domainlab::Preference::from_indices(&[0, 1, 2, 3, 4, 5]).unwrap();
    assert!(is_sp_pref(&declining, &t));
}

#[test]
fn hybrid_preferences() {
    let d = fixtures::d1();
    let (_, t) = fixtures::line6();
    let (a2, a5) = (alt(&d, "a2"), alt(&d, "a5"));
    assert!(is_hybrid_pref(d.pref(1), &t, a2, a5).unwrap());
    let u = universal(4);
    let l4 = Tree::standard_line(4);
    for p in u.prefs() {
        assert!(is_hybrid_pref(p, &l4, a(0), a(3)).unwrap());
        assert!(is_sh_pref(p, &l4, a(0), a(3)).unwrap());
        if is_sp_pref(p, &l4) {
            assert!(is_hybrid_pref(p, &l4, a(1), a(2)).unwrap());
        }
        if is_hybrid_pref(p, &l4, a(0), a(2)).unwrap() {
            assert!(is_sh_pref(p, &l4, a(0), a(2)).unwrap());
        }
    }
}

#[test]
fn semi_single_peaked_preferences() {
    let d = fixtures::d1();
    let (_, fig) = fixtures::d1_adjacency();
    let a2 = alt(&d, "a2");
    for p in d.prefs() {
        assert!(is_ssp_pref(p, &fig, a2));
    }
    let ext = fixtures::d1_ext();
    let p13 = ext.pref(12);
    assert_eq!(
        p13.ranking().iter().map(|x| ext.label(*x)).collect::<Vec<_>>(),
        ["a5", "a3", "a2", "a1", "a4", "a6"]
    );
    assert!(!is_ssp_pref(p13, &fig, a2));
    let dist = distances(6, &edges_usize(&fig));
    for (i, r) in rankings(&ext).iter().enumerate() {
        assert_eq!(is_ssp_pref(ext.pref(i), &fig, a2), naive_ssp(r, &dist, 1));
        assert!(is_ssp_pref(ext.pref(i), &fig, ext.pref(i).top()));
    }
}

#[test]
fn semi_hybrid_on_table_one() {
    let d = fixtures::d1();
    let (_, t) = fixtures::line6();
    for p in d.prefs() {
        assert!(is_sh_pref(p, &t, alt(&d, "a2"), alt(&d, "a5")).unwrap());
    }
}

#[test]
fn ssp_certificates() {
    let d = fixtures::d1();
    let cert = certify_ssp_domain(&d, &budget());
    let c = cert.certificate().expect("certified");
    let (_, fig) = fixtures::d1_adjacency();
    assert_eq!(edges_of(c.kind.tree().graph()), edges_of(fig.graph()));
    assert!(c.valid_thresholds.contains(&alt(&d, "a2")));

    let l4 = gen(FamilyKind::ssp(Tree::standard_line(4), a(1)).unwrap());
    let c = certify_ssp_domain(&l4, &budget());
    let c = c.certificate().expect("certified");
    assert_eq!(c.kind.tree(), &Tree::standard_line(4));
    assert!(c.valid_thresholds.contains(&a(1)));

    assert!(matches!(
        certify_ssp_domain(&fixtures::d1_ext(), &budget()),
        Certification::Absent { .. }
    ));
}

#[test]
fn sh_certificates() {
    let ext = fixtures::d1_ext();
    let c = certify_sh_domain(&ext, &budget());
    let c = c.certificate().expect("certified");
    assert_eq!(c.kind.thresholds(), Some((alt(&ext, "a2"), alt(&ext, "a5"))));
    assert_eq!(c.degenerate, Some(false));

    let d1 = fixtures::d1();
    match certify_sh_domain(&d1, &budget()) {
        Certification::Absent { candidate: Some(cand) } => {
            assert_eq!(cand.conditions.third, Some(false));
            assert_eq!(cand.conditions.failing_leaves, vec![alt(&d1, "a2")]);
        }
        other => panic!("{other:?}"),
    }

    let d4 = fixtures::d4();
    let c = certify_sh_domain(&d4, &budget());
    let c = c.certificate().expect("certified");
    let (x, y) = c.kind.thresholds().unwrap();
    let ends: BTreeSet<Alt> = [x, y].into();
    assert_eq!(ends, [alt(&d4, "a1"), alt(&d4, "a4")].into());
    assert_eq!(c.degenerate, Some(true));
}

#[test]
fn sp_and_hybrid_certificates() {
    let sp5 = gen(FamilyKind::sp(Tree::standard_line(5)));
    let c = certify_sp_domain(&sp5, &budget());
    assert_eq!(c.certificate().unwrap().kind.tree(), &Tree::standard_line(5));
    assert!(!certify_hybrid_domain(&sp5, &budget()).is_certified());

    let h = gen(FamilyKind::hybrid(Tree::standard_line(6), a(1), a(4)).unwrap());
    let c = certify_hybrid_domain(&h, &budget());
    let c = c.certificate().expect("certified");
    assert_eq!(c.free_zone, Some([1, 2, 3, 4].into_iter().map(a).collect()));
}

#[test]
fn small_sp_family_size() {
    assert_eq!(gen(FamilyKind::sp(Tree::standard_line(3))).len(), 4);
}

#[test]
fn hybrid_on_an_edge_is_single_peaked() {
    let t = Tree::standard_line(5);
    let sp: BTreeSet<Ranking> = rankings(&gen(FamilyKind::sp(t.clone()))).into_iter().collect();
    for (x, y) in t.edges() {
        let h: BTreeSet<Ranking> = rankings(&gen(FamilyKind::hybrid(t.clone(), x, y).unwrap()))
            .into_iter()
            .collect();
        assert_eq!(h, sp);
    }
}

// rules

#[test]
fn projection_evaluation() {
    let u = universal(4);
    let f = make_projection(Tree::standard_line(4), a(1), 2).unwrap();
    let p = Profile(vec![pref_starting(&u, &[2]), pref_starting(&u, &[3])]);
    assert_eq!(f.eval(&u, &p).unwrap(), a(2));
}

#[test]
fn hybrid_evaluation() {
    let u = universal(6);
    let f = make_hybrid(Tree::standard_line(6), a(1), a(4), 0, 2).unwrap();
    let p = Profile(vec![pref_starting(&u, &[2]), pref_starting(&u, &[5])]);
    assert_eq!(f.eval(&u, &p).unwrap(), a(2));
    let p = Profile(vec![pref_starting(&u, &[0]), pref_starting(&u, &[5])]);
    assert_eq!(f.eval(&u, &p).unwrap(), a(1));
}

#[test]
fn pnt_evaluation() {
    let u = universal(4);
    let f = make_pnt(Tree::standard_line(4), a(1), a(2), 0, 1, 2).unwrap();
    let p = Profile(vec![pref_starting(&u, &[0]), pref_starting(&u, &[3, 2])]);
    assert_eq!(f.eval(&u, &p).unwrap(), a(2));
}

#[test]
fn hybrid_needs_a_free_zone() {
    let err = make_hybrid(Tree::standard_line(4), a(1), a(2), 0, 2).unwrap_err();
    assert!(matches!(err, RuleError::FreeZoneTooSmall(2)), "{err:?}");
}

#[test]
fn almost_dictatorship_from_unique_seconds() {
    let d4 = fixtures::d4();
    let (x, y) = unique_seconds(&d4).unwrap();
    let f = make_almost_dictatorship(x, y, 0, 1, 2).unwrap();
    assert!(check_strategy_proof(&f, &d4, &budget()).unwrap().holds);
}

#[test]
fn pnt_at_a_leaf_edge_is_the_almost_dictatorship() {
    let t = Tree::standard_line(4);
    let d = gen(FamilyKind::ssp(t.clone(), a(2)).unwrap());
    for n in [2, 3] {
        let pnt = make_pnt(t.clone(), a(0), a(1), 0, 1, n).unwrap();
        let ad = make_almost_dictatorship(a(0), a(1), 0, 1, n).unwrap();
        assert_eq!(outcome_vec(&pnt, &d), outcome_vec(&ad, &d));
    }
}

#[test]
fn unanimity_checks() {
    let d = fixtures::d1();
    let f = make_projection(Tree::standard_line(6), a(3), 2).unwrap();
    assert!(check_unanimity(&f, &d, &budget()).unwrap().holds);
    let constant = make_full_table(&d, 2, |_| a(0)).unwrap();
    let r = check_unanimity(&constant, &d, &budget()).unwrap();
    assert!(!r.holds && r.witness.is_some());
}

#[test]
fn strategy_proofness_checks() {
    let t = Tree::standard_line(6);
    let sh = gen(FamilyKind::sh(t.clone(), a(1), a(4)).unwrap());
    let f = make_hybrid(t, a(1), a(4), 0, 2).unwrap();
    assert!(check_strategy_proof(&f, &sh, &budget()).unwrap().holds);
    assert!(naive_sp_witness(&rankings(&sh), 2, &outcome_vec(&f, &sh)).is_none());

    let u = universal(4);
    let f = make_projection(Tree::standard_line(4), a(1), 2).unwrap();
    let r = check_strategy_proof(&f, &u, &budget()).unwrap();
    assert!(!r.holds && r.witness.is_some());
    assert!(naive_sp_witness(&rankings(&u), 2, &outcome_vec(&f, &u)).is_some());
}

#[test]
fn example_rules_on_their_domains() {
    let d2 = fixtures::d2();
    let f = make_full_table(&d2, 2, two_triangle_rule(&d2)).unwrap();
    assert!(check_strategy_proof(&f, &d2, &budget()).unwrap().holds);

    let d3 = fixtures::d3();
    let f = make_full_table(&d3, 2, star_rule(&d3)).unwrap();
    assert!(check_unanimity(&f, &d3, &budget()).unwrap().holds);
    assert!(check_anonymity(&f, &d3, &budget()).unwrap().holds);
    assert!(!check_tops_only(&f, &d3, &budget()).unwrap().holds);
    let out = outcome_vec(&f, &d3);
    assert!(!naive_tops_only(&rankings(&d3), 2, &out));
    assert!(naive_anonymous(d3.len(), 2, &out));
}

#[test]
fn dictatorships_are_not_anonymous() {
    let d = fixtures::d1();
    let f = make_dictatorship(1, 2).unwrap();
    assert!(!check_anonymity(&f, &d, &budget()).unwrap().holds);
    assert!(check_tops_only(&f, &d, &budget()).unwrap().holds);
}

#[test]
fn invariance_checks() {
    let d = fixtures::d1();
    let (_, fig) = fixtures::d1_adjacency();
    let f = make_projection(fig, alt(&d, "a2"), 2).unwrap();
    assert!(check_invariance(&f, &d, &budget()).unwrap().holds);

    let t = Tree::standard_line(6);
    let sh = gen(FamilyKind::sh(t.clone(), a(1), a(4)).unwrap());
    let h = make_hybrid(t, a(1), a(4), 0, 2).unwrap();
    assert!(!check_invariance(&h, &sh, &budget()).unwrap().holds);
    assert!(!check_anonymity(&h, &sh, &budget()).unwrap().holds);
}

#[test]
fn dictators_on_subsets() {
    let t = Tree::standard_line(6);
    let sh = gen(FamilyKind::sh(t.clone(), a(1), a(4)).unwrap());
    let h = make_hybrid(t, a(1), a(4), 0, 2).unwrap();
    let free: AltSet = [1, 2, 3, 4].into_iter().map(a).collect();
    assert_eq!(dictator_on(&h, &sh, free, &budget()).unwrap(), Some(0));
    assert_eq!(dictator_on(&h, &sh, AltSet::single(a(0)), &budget()).unwrap(), Some(0));

    let l4 = Tree::standard_line(4);
    let ssp = gen(FamilyKind::ssp(l4.clone(), a(1)).unwrap());
    let f = make_projection(l4, a(1), 2).unwrap();
    let ends: AltSet = [0, 3].into_iter().map(a).collect();
    assert_eq!(dictator_on(&f, &ssp, ends, &budget()).unwrap(), None);
}

// enumeration

#[test]
fn enumeration_on_a_short_line() {
    let d = gen(FamilyKind::sp(Tree::standard_line(3)));
    let rules = enum_topsonly_sp_rules(&d, &budget()).unwrap();
    for f in &rules {
        assert!(check_strategy_proof(f, &d, &budget()).unwrap().holds);
        assert!(check_unanimity(f, &d, &budget()).unwrap().holds);
    }
    let brute = brute_topsonly_sp(&rankings(&d), 3);
    assert_eq!(rules.len(), brute.len());
    assert_eq!(rules.len(), 9);
}

#[test]
fn enumeration_contains_the_projection() {
    let l4 = Tree::standard_line(4);
    let d = gen(FamilyKind::ssp(l4.clone(), a(1)).unwrap());
    let rules = enum_topsonly_sp_rules(&d, &budget()).unwrap();
    assert!(!rules.is_empty());
    let proj = outcome_vec(&make_projection(l4.clone(), a(1), 2).unwrap(), &d);
    assert!(rules.iter().any(|f| outcome_vec(f, &d) == proj));

    let table = make_projection(l4.clone(), a(1), 2).unwrap().to_peak_table(&d).unwrap();
    match decompose_rule(&table, &d, &budget()).unwrap() {
        Decomposition::Projection(pairs) => assert!(pairs.iter().any(|(t, x)| t == &l4 && *x == a(1))),
        other => panic!("{other:?}"),
    }
}

#[test]
fn dictatorship_tables_decompose() {
    let d = fixtures::d1();
    let table = make_dictatorship(1, 2).unwrap().to_peak_table(&d).unwrap();
    assert_eq!(
        decompose_rule(&table, &d, &budget()).unwrap(),
        Decomposition::Dictatorship(1)
    );
}

#[test]
fn micro_enumeration_on_reversed_pair() {
    let d = parse_domain("alternatives: a1 a2 a3\npref: a1 a2 a3\npref: a3 a2 a1\n", "rev").unwrap();
    let rules = enum_all_sp_rules_micro(&d, 2, &budget()).unwrap();
    let vecs: BTreeSet<Vec<usize>> = rules.iter().map(|f| outcome_vec(f, &d)).collect();
    for v in 0..2 {
        assert!(vecs.contains(&outcome_vec(&make_dictatorship(v, 2).unwrap(), &d)));
    }
    assert_eq!(vecs, brute_all_sp(&rankings(&d), 3, 2));
}

#[test]
fn micro_enumeration_on_a_table_four_pair() {
    let d = fixtures::d4().subdomain("pair", &[0, 8]).unwrap();
    let rules = enum_all_sp_rules_micro(&d, 2, &budget()).unwrap();
    for f in &rules {
        assert!(check_strategy_proof(f, &d, &budget()).unwrap().holds);
        assert!(check_unanimity(f, &d, &budget()).unwrap().holds);
    }
    let vecs: BTreeSet<Vec<usize>> = rules.iter().map(|f| outcome_vec(f, &d)).collect();
    assert_eq!(vecs, brute_all_sp(&rankings(&d), d.m(), 2));
}

#[test]
fn micro_enumeration_on_a_singleton() {
    let d = fixtures::d1().subdomain("one", &[4]).unwrap();
    let rules = enum_all_sp_rules_micro(&d, 2, &budget()).unwrap();
    assert_eq!(rules.len(), 1);
    assert_eq!(outcome_vec(&rules[0], &d), vec![d.pref(0).top().index()]);
}
