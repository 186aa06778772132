//! Shared fixtures for the benchmark targets.

use homfill::builders::{build_coned_off, ConedGroup, ConedOffSpec};
use homfill::{Chain, ChainComplex};

pub fn coned_plane(radius: u32) -> ChainComplex {
    build_coned_off(&ConedOffSpec {
        group: ConedGroup::FreeAbelian2,
        radius,
    })
    .expect("radius >= 1")
}

pub fn coned_tree(radius: u32) -> ChainComplex {
    build_coned_off(&ConedOffSpec {
        group: ConedGroup::Free2,
        radius,
    })
    .expect("radius >= 1")
}

/// The norm-6 hexagon through the cone over the b-axis.
pub fn hexagon(x: &ChainComplex, m: i64) -> Chain {
    let edges = x.basis(1).expect("degree 1");
    Chain::from_labels(
        edges,
        [
            ("p(0,1)".to_string(), -1i64),
            ("a(0,1)".to_string(), 1),
            ("p(1,1)".to_string(), 1),
            (format!("p(1,{m})"), -1),
            (format!("a(0,{m})"), -1),
            (format!("p(0,{m})"), 1),
        ]
        .iter()
        .map(|(l, c)| (l.as_str(), *c)),
    )
    .expect("hexagon edges exist")
}
