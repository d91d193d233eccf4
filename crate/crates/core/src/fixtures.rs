//! Bundled example domains and trees.

use crate::pref::{parse_domain, Domain};
use crate::tree::{parse_graph, Graph, Tree};

pub const D1: &str = include_str!("../fixtures/d1.dom");
pub const D1_EXT: &str = include_str!("../fixtures/d1_ext.dom");
pub const D2: &str = include_str!("../fixtures/d2.dom");
pub const D3: &str = include_str!("../fixtures/d3.dom");
pub const D4: &str = include_str!("../fixtures/d4.dom");
pub const LINE6: &str = include_str!("../fixtures/line6.tree");
pub const D1_ADJACENCY: &str = include_str!("../fixtures/d1_adjacency.tree");
pub const D4_ADJACENCY: &str = include_str!("../fixtures/d4_adjacency.graph");
pub const STAR4: &str = include_str!("../fixtures/star4.tree");
pub const SPINE25: &str = include_str!("../fixtures/spine25.tree");

fn domain(text: &str, name: &str) -> Domain {
    parse_domain(text, name).expect("bundled domain parses")
}

fn tree(text: &str) -> (Vec<String>, Tree) {
    let (labels, g) = parse_graph(text, None).expect("bundled tree parses");
    (labels, Tree::new(g).expect("bundled tree is a tree"))
}

/// Twelve preferences on six alternatives; semi-single-peaked w.r.t. a2.
pub fn d1() -> Domain {
    domain(D1, "d1")
}

/// `d1` plus `a5 a3 a2 a1 a4 a6`; (a2,a5)-semi-hybrid on the line.
pub fn d1_ext() -> Domain {
    domain(D1_EXT, "d1_ext")
}

/// Two isolated adjacency triangles.
pub fn d2() -> Domain {
    domain(D2, "d2")
}

/// Path-connected on a star, fails leaf symmetry.
pub fn d3() -> Domain {
    domain(D3, "d3")
}

/// Degenerate (a1,a4)-semi-hybrid domain.
pub fn d4() -> Domain {
    domain(D4, "d4")
}

pub fn line6() -> (Vec<String>, Tree) {
    tree(LINE6)
}

pub fn d1_adjacency() -> (Vec<String>, Tree) {
    tree(D1_ADJACENCY)
}

pub fn star4() -> (Vec<String>, Tree) {
    tree(STAR4)
}

pub fn spine25() -> (Vec<String>, Tree) {
    tree(SPINE25)
}

pub fn d4_adjacency() -> (Vec<String>, Graph) {
    parse_graph(D4_ADJACENCY, None).expect("bundled graph parses")
}
