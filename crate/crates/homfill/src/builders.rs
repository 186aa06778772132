//! Constructors for the test complexes: simplices, grids, tori, paths and
//! cycles, the coned-off Cayley complexes of the free and free-abelian
//! groups on two generators at finite word-metric radius, and a circuit
//! counter for fineness checks on 1-skeletons.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;



use crate::chain::{Basis, BasisId, Chain, ChainComplex, ModuleMap};
use crate::error::{Error, Result};

fn basis(name: &str, labels: Vec<String>) -> Arc<Basis> {
    Basis::new(name, labels).expect("builder labels are distinct")
}

fn map_from_columns(
    source: &Arc<Basis>,
    target: &Arc<Basis>,
    columns: Vec<Vec<(String, i64)>>,
) -> ModuleMap {
    let cols = columns
        .into_iter()
        .map(|terms| {
            Chain::from_labels(target, terms.iter().map(|(l, c)| (l.as_str(), *c)))
                .expect("builder boundary labels exist")
        })
        .collect();
    ModuleMap::new(source, target, cols).expect("builder map shape")
}

/// Boundary sphere of the 3-simplex; with `solid` the single 3-cell is
/// attached along it.
pub fn build_tetrahedron(solid: bool) -> ChainComplex {
    let verts = basis(
        "tetra0",
        (0..4).map(|i| format!("v{i}")).collect::<Vec<_>>(),
    );
    let pairs: Vec<(usize, usize)> = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .collect();
    let edges = basis(
        "tetra1",
        pairs.iter().map(|(i, j)| format!("e{i}{j}")).collect(),
    );
    let triples: Vec<(usize, usize, usize)> = (0..4)
        .flat_map(|i| {
            (i + 1..4).flat_map(move |j| (j + 1..4).map(move |k| (i, j, k)))
        })
        .collect();
    let faces = basis(
        "tetra2",
        triples
            .iter()
            .map(|(i, j, k)| format!("f{i}{j}{k}"))
            .collect(),
    );

    let d1 = map_from_columns(
        &edges,
        &verts,
        pairs
            .iter()
            .map(|(i, j)| vec![(format!("v{j}"), 1), (format!("v{i}"), -1)])
            .collect(),
    );
    let d2 = map_from_columns(
        &faces,
        &edges,
        triples
            .iter()
            .map(|(i, j, k)| {
                vec![
                    (format!("e{j}{k}"), 1),
                    (format!("e{i}{k}"), -1),
                    (format!("e{i}{j}"), 1),
                ]
            })
            .collect(),
    );

    if !solid {
        return ChainComplex::new("tetra_hollow", vec![verts, edges, faces], vec![d1, d2])
            .expect("tetra shape");
    }
    let cells = basis("tetra3", vec!["t0123".to_string()]);
    let d3 = map_from_columns(
        &cells,
        &faces,
        vec![vec![
            ("f123".to_string(), 1),
            ("f023".to_string(), -1),
            ("f013".to_string(), 1),
            ("f012".to_string(), -1),
        ]],
    );
    ChainComplex::new(
        "tetra_solid",
        vec![verts, edges, faces, cells],
        vec![d1, d2, d3],
    )
    .expect("tetra shape")
}

/// Rectangular disc of `w x h` unit squares.
pub fn build_grid(w: usize, h: usize) -> ChainComplex {
    assert!(w >= 1 && h >= 1, "grid needs at least one square");
    let mut vlabels = Vec::new();
    for y in 0..=h {
        for x in 0..=w {
            vlabels.push(format!("v({x},{y})"));
        }
    }
    let verts = basis(&format!("grid{w}x{h}_0"), vlabels);

    let mut elabels = Vec::new();
    let mut ecols = Vec::new();
    for y in 0..=h {
        for x in 0..w {
            elabels.push(format!("ex({x},{y})"));
            ecols.push(vec![
                (format!("v({},{y})", x + 1), 1),
                (format!("v({x},{y})"), -1),
            ]);
        }
    }
    for y in 0..h {
        for x in 0..=w {
            elabels.push(format!("ey({x},{y})"));
            ecols.push(vec![
                (format!("v({x},{})", y + 1), 1),
                (format!("v({x},{y})"), -1),
            ]);
        }
    }
    let edges = basis(&format!("grid{w}x{h}_1"), elabels);
    let d1 = map_from_columns(&edges, &verts, ecols);

    let mut slabels = Vec::new();
    let mut scols = Vec::new();
    for y in 0..h {
        for x in 0..w {
            slabels.push(format!("sq({x},{y})"));
            scols.push(vec![
                (format!("ex({x},{y})"), 1),
                (format!("ey({},{y})", x + 1), 1),
                (format!("ex({x},{})", y + 1), -1),
                (format!("ey({x},{y})"), -1),
            ]);
        }
    }
    let squares = basis(&format!("grid{w}x{h}_2"), slabels);
    let d2 = map_from_columns(&squares, &edges, scols);

    ChainComplex::new(
        format!("grid_{w}x{h}"),
        vec![verts, edges, squares],
        vec![d1, d2],
    )
    .expect("grid shape")
}

/// Square grid on the torus with periodic identifications; carries
/// 1-cycles with no integral filling.
pub fn build_torus_grid(n: usize) -> ChainComplex {
    assert!(n >= 2, "torus grid needs n >= 2");
    let mut vlabels = Vec::new();
    for y in 0..n {
        for x in 0..n {
            vlabels.push(format!("v({x},{y})"));
        }
    }
    let verts = basis(&format!("torus{n}_0"), vlabels);

    let mut elabels = Vec::new();
    let mut ecols = Vec::new();
    for y in 0..n {
        for x in 0..n {
            elabels.push(format!("ex({x},{y})"));
            ecols.push(vec![
                (format!("v({},{y})", (x + 1) % n), 1),
                (format!("v({x},{y})"), -1),
            ]);
        }
    }
    for y in 0..n {
        for x in 0..n {
            elabels.push(format!("ey({x},{y})"));
            ecols.push(vec![
                (format!("v({x},{})", (y + 1) % n), 1),
                (format!("v({x},{y})"), -1),
            ]);
        }
    }
    let edges = basis(&format!("torus{n}_1"), elabels);
    let d1 = map_from_columns(&edges, &verts, ecols);

    let mut slabels = Vec::new();
    let mut scols = Vec::new();
    for y in 0..n {
        for x in 0..n {
            slabels.push(format!("sq({x},{y})"));
            scols.push(vec![
                (format!("ex({x},{y})"), 1),
                (format!("ey({},{y})", (x + 1) % n), 1),
                (format!("ex({x},{})", (y + 1) % n), -1),
                (format!("ey({x},{y})"), -1),
            ]);
        }
    }
    let squares = basis(&format!("torus{n}_2"), slabels);
    let d2 = map_from_columns(&squares, &edges, scols);

    ChainComplex::new(
        format!("torus_{n}"),
        vec![verts, edges, squares],
        vec![d1, d2],
    )
    .expect("torus shape")
}

/// Path graph with `n` edges `v0 - v1 - ... - vn`.
pub fn build_path(n: usize) -> ChainComplex {
    assert!(n >= 1, "path needs at least one edge");
    let verts = basis(
        &format!("path{n}_0"),
        (0..=n).map(|i| format!("v{i}")).collect(),
    );
    let edges = basis(
        &format!("path{n}_1"),
        (0..n).map(|i| format!("e{i}")).collect(),
    );
    let d1 = map_from_columns(
        &edges,
        &verts,
        (0..n)
            .map(|i| vec![(format!("v{}", i + 1), 1), (format!("v{i}"), -1)])
            .collect(),
    );
    ChainComplex::new(format!("path_{n}"), vec![verts, edges], vec![d1]).expect("path shape")
}

/// Cycle graph with `n` edges.
pub fn build_cycle(n: usize) -> ChainComplex {
    assert!(n >= 2, "cycle needs at least two edges");
    let verts = basis(
        &format!("cycle{n}_0"),
        (0..n).map(|i| format!("v{i}")).collect(),
    );
    let edges = basis(
        &format!("cycle{n}_1"),
        (0..n).map(|i| format!("e{i}")).collect(),
    );
    let d1 = map_from_columns(
        &edges,
        &verts,
        (0..n)
            .map(|i| vec![(format!("v{}", (i + 1) % n), 1), (format!("v{i}"), -1)])
            .collect(),
    );
    ChainComplex::new(format!("cycle_{n}"), vec![verts, edges], vec![d1]).expect("cycle shape")
}

/// Which group underlies a coned-off Cayley complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConedGroup {
    /// Free group on `a`, `b`; no relator cells, cone triangles only.
    Free2,
    /// Free abelian group on `a`, `b`; commutator squares plus cone
    /// triangles.
    FreeAbelian2,
}

/// Truncation parameters for a coned-off Cayley complex over the
/// peripheral subgroup generated by `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConedOffSpec {
    pub group: ConedGroup,
    pub radius: u32,
}

/// Reduced word over `a b A B` (capitals are inverses); empty = identity.
fn free_mul(word: &str, gen: char) -> String {
    let mut w: Vec<char> = word.chars().collect();
    let inverse = |c: char| match c {
        'a' => 'A',
        'A' => 'a',
        'b' => 'B',
        'B' => 'b',
        _ => unreachable!(),
    };
    if w.last() == Some(&inverse(gen)) {
        w.pop();
    } else {
        w.push(gen);
    }
    w.into_iter().collect()
}

fn free_label(word: &str) -> String {
    if word.is_empty() {
        "1".to_string()
    } else {
        word.to_string()
    }
}

/// Coset representative of `w<b>`: strip trailing `b` or `B`.
fn free_coset_rep(word: &str) -> String {
    let mut w = word.to_string();
    while w.ends_with('b') || w.ends_with('B') {
        w.pop();
    }
    w
}

/// Coned-off Cayley complex truncated to the word-metric ball of the
/// given radius. Cone vertices appear as soon as a representative is in
/// the ball; every 2-cell needs all of its vertices present.
pub fn build_coned_off(spec: &ConedOffSpec) -> Result<ChainComplex> {
    if spec.radius == 0 {
        return Err(Error::InvalidInput(
            "coned-off truncation needs radius >= 1".to_string(),
        ));
    }
    match spec.group {
        ConedGroup::Free2 => Ok(build_coned_free2(spec.radius)),
        ConedGroup::FreeAbelian2 => Ok(build_coned_z2(spec.radius)),
    }
}

fn build_coned_free2(radius: u32) -> ChainComplex {
    // ball in the free group, BFS over reduced words
    let mut ball: BTreeSet<String> = BTreeSet::new();
    ball.insert(String::new());
    let mut frontier = vec![String::new()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in frontier {
            for g in ['a', 'A', 'b', 'B'] {
                let u = free_mul(&w, g);
                if ball.insert(u.clone()) {
                    next.push(u);
                }
            }
        }
        frontier = next;
    }
    let mut group: Vec<String> = ball.iter().cloned().collect();
    group.sort_by_key(|w| (w.len(), w.clone()));
    let cones: BTreeSet<String> = group.iter().map(|w| free_coset_rep(w)).collect();
    let mut cones: Vec<String> = cones.into_iter().collect();
    cones.sort_by_key(|w| (w.len(), w.clone()));

    let mut vlabels: Vec<String> = group.iter().map(|w| free_label(w)).collect();
    vlabels.extend(cones.iter().map(|w| format!("P({})", free_label(w))));
    let verts = basis(&format!("conedf2_{radius}_0"), vlabels);

    let in_ball = |w: &String| ball.contains(w);
    let mut elabels = Vec::new();
    let mut ecols = Vec::new();
    for w in &group {
        for g in ['a', 'b'] {
            let u = free_mul(w, g);
            if in_ball(&u) {
                elabels.push(format!("{g}({})", free_label(w)));
                ecols.push(vec![(free_label(&u), 1), (free_label(w), -1)]);
            }
        }
    }
    for w in &group {
        elabels.push(format!("p({})", free_label(w)));
        ecols.push(vec![
            (format!("P({})", free_label(&free_coset_rep(w))), 1),
            (free_label(w), -1),
        ]);
    }
    let edges = basis(&format!("conedf2_{radius}_1"), elabels);
    let d1 = map_from_columns(&edges, &verts, ecols);

    // one cone triangle per pair (w, wb) inside the ball
    let mut tlabels = Vec::new();
    let mut tcols = Vec::new();
    for w in &group {
        let u = free_mul(w, 'b');
        if in_ball(&u) {
            tlabels.push(format!("t({})", free_label(w)));
            tcols.push(vec![
                (format!("b({})", free_label(w)), 1),
                (format!("p({})", free_label(&u)), 1),
                (format!("p({})", free_label(w)), -1),
            ]);
        }
    }
    let cells = basis(&format!("conedf2_{radius}_2"), tlabels);
    let d2 = map_from_columns(&cells, &edges, tcols);

    ChainComplex::new(
        format!("coned_f2_{radius}"),
        vec![verts, edges, cells],
        vec![d1, d2],
    )
    .expect("coned shape")
}

fn z2_label(p: (i64, i64)) -> String {
    format!("({},{})", p.0, p.1)
}

fn build_coned_z2(radius: u32) -> ChainComplex {
    let r = radius as i64;
    let mut group: Vec<(i64, i64)> = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            if x.abs() + y.abs() <= r {
                group.push((x, y));
            }
        }
    }
    group.sort_by_key(|&(x, y)| (x.abs() + y.abs(), x, y));
    let in_ball = |p: (i64, i64)| p.0.abs() + p.1.abs() <= r;

    // cosets of <b> are the vertical lines x = const; representative (x, 0)
    let cones: BTreeSet<i64> = group.iter().map(|&(x, _)| x).collect();
    let cones: Vec<i64> = cones.into_iter().collect();

    let mut vlabels: Vec<String> = group.iter().map(|&p| z2_label(p)).collect();
    vlabels.extend(cones.iter().map(|x| format!("P({x})")));
    let verts = basis(&format!("conedz2_{radius}_0"), vlabels);

    let mut elabels = Vec::new();
    let mut ecols = Vec::new();
    for &(x, y) in &group {
        if in_ball((x + 1, y)) {
            elabels.push(format!("a({x},{y})"));
            ecols.push(vec![(z2_label((x + 1, y)), 1), (z2_label((x, y)), -1)]);
        }
        if in_ball((x, y + 1)) {
            elabels.push(format!("b({x},{y})"));
            ecols.push(vec![(z2_label((x, y + 1)), 1), (z2_label((x, y)), -1)]);
        }
    }
    for &(x, y) in &group {
        elabels.push(format!("p({x},{y})"));
        ecols.push(vec![(format!("P({x})"), 1), (z2_label((x, y)), -1)]);
    }
    let edges = basis(&format!("conedz2_{radius}_1"), elabels);
    let d1 = map_from_columns(&edges, &verts, ecols);

    let mut clabels = Vec::new();
    let mut ccols = Vec::new();
    // commutator squares with all four corners in the ball
    for &(x, y) in &group {
        if in_ball((x + 1, y)) && in_ball((x, y + 1)) && in_ball((x + 1, y + 1)) {
            clabels.push(format!("sq({x},{y})"));
            ccols.push(vec![
                (format!("a({x},{y})"), 1),
                (format!("b({},{y})", x + 1), 1),
                (format!("a({x},{})", y + 1), -1),
                (format!("b({x},{y})"), -1),
            ]);
        }
    }
    // cone triangles on b-edges
    for &(x, y) in &group {
        if in_ball((x, y + 1)) {
            clabels.push(format!("t({x},{y})"));
            ccols.push(vec![
                (format!("b({x},{y})"), 1),
                (format!("p({x},{})", y + 1), 1),
                (format!("p({x},{y})"), -1),
            ]);
        }
    }
    let cells = basis(&format!("conedz2_{radius}_2"), clabels);
    let d2 = map_from_columns(&cells, &edges, ccols);

    ChainComplex::new(
        format!("coned_z2_{radius}"),
        vec![verts, edges, cells],
        vec![d1, d2],
    )
    .expect("coned shape")
}

/// A closed edge path visiting no vertex twice, reported in a canonical
/// rotation/reflection-invariant form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Circuit {
    pub vertices: Vec<BasisId>,
    pub edges: Vec<BasisId>,
}

impl Circuit {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Minimal form over all rotations of both orientations.
    fn canonical(vertices: Vec<BasisId>, edges: Vec<BasisId>) -> Circuit {
        let l = vertices.len();
        debug_assert_eq!(l, edges.len());
        let mut best: Option<(Vec<BasisId>, Vec<BasisId>)> = None;
        for start in 0..l {
            // forward: vertices[start..], edges[start..]
            let fv: Vec<BasisId> = (0..l).map(|i| vertices[(start + i) % l]).collect();
            let fe: Vec<BasisId> = (0..l).map(|i| edges[(start + i) % l]).collect();
            // reversed: walk the other way; edge i sits before vertex i+1
            let rv: Vec<BasisId> = (0..l).map(|i| vertices[(start + l - i) % l]).collect();
            let re: Vec<BasisId> = (0..l).map(|i| edges[(start + l - 1 - i) % l]).collect();
            for cand in [(fv, fe), (rv, re)] {
                if best.as_ref().map_or(true, |b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        let (vertices, edges) = best.expect("nonempty circuit");
        Circuit { vertices, edges }
    }
}

struct Skeleton {
    adjacency: Vec<Vec<(usize, usize)>>, // vertex -> (neighbor, edge id)
    endpoints: Vec<(usize, usize)>,      // edge -> (tail, head)
}

fn skeleton(x: &ChainComplex) -> Result<Skeleton> {
    let nv = x.size(0);
    let mut adjacency = vec![Vec::new(); nv];
    let mut endpoints = Vec::new();
    if let Some(d1) = x.boundary(1) {
        for (e, col) in d1.columns().iter().enumerate() {
            let mut tail = None;
            let mut head = None;
            for (v, c) in col.iter() {
                if c == &num_bigint::BigInt::from(1) && head.is_none() {
                    head = Some(v.0);
                } else if c == &num_bigint::BigInt::from(-1) && tail.is_none() {
                    tail = Some(v.0);
                } else {
                    return Err(Error::InvalidInput(format!(
                        "edge `{}` is not an oriented 1-cell",
                        d1.source().label(BasisId(e))
                    )));
                }
            }
            match (tail, head) {
                (Some(t), Some(h)) => {
                    adjacency[t].push((h, e));
                    adjacency[h].push((t, e));
                    endpoints.push((t, h));
                }
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "edge `{}` is not an oriented 1-cell",
                        d1.source().label(BasisId(e))
                    )))
                }
            }
        }
    }
    for adj in &mut adjacency {
        adj.sort();
    }
    Ok(Skeleton {
        adjacency,
        endpoints,
    })
}

/// All circuits of length at most `n` through the edge `e`, each counted
/// once up to rotation and reflection, sorted by length then canonical
/// form.
pub fn circuits_through_edge(x: &ChainComplex, e: BasisId, n: usize) -> Result<Vec<Circuit>> {
    let edges = x.basis(1).ok_or(Error::DegreeOutOfRange {
        degree: 1,
        top: x.top_degree(),
    })?;
    if e.0 >= edges.size() {
        return Err(Error::IndexOutOfRange {
            index: e.0,
            basis: edges.name().to_string(),
            size: edges.size(),
        });
    }
    let sk = skeleton(x)?;
    let (u, v) = sk.endpoints[e.0];
    if u == v {
        return Ok(Vec::new()); // a self-loop lies on no vertex-simple circuit
    }
    let mut found: BTreeSet<Circuit> = BTreeSet::new();
    // vertex-simple paths from v back to u avoiding e; path + e = circuit
    let mut visited = vec![false; sk.adjacency.len()];
    visited[v] = true;
    let mut path_vertices = vec![u, v];
    let mut path_edges = vec![e.0];
    dfs_paths(
        &sk,
        u,
        v,
        e.0,
        n,
        &mut visited,
        &mut path_vertices,
        &mut path_edges,
        &mut found,
    );
    let mut out: Vec<Circuit> = found.into_iter().collect();
    out.sort_by_key(|c| (c.len(), c.vertices.clone(), c.edges.clone()));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs_paths(
    sk: &Skeleton,
    target: usize,
    current: usize,
    banned_edge: usize,
    n: usize,
    visited: &mut Vec<bool>,
    path_vertices: &mut Vec<usize>,
    path_edges: &mut Vec<usize>,
    found: &mut BTreeSet<Circuit>,
) {
    for &(next, eid) in &sk.adjacency[current] {
        if eid == banned_edge {
            continue;
        }
        if next == target {
            if path_edges.len() >= 2 || eid != path_edges[0] {
                let vertices = path_vertices.iter().map(|&v| BasisId(v)).collect();
                let mut edges: Vec<BasisId> =
                    path_edges.iter().skip(1).map(|&e| BasisId(e)).collect();
                edges.push(BasisId(eid));
                edges.insert(0, BasisId(path_edges[0]));
                found.insert(Circuit::canonical(vertices, edges));
            }
            continue;
        }
        if visited[next] || path_edges.len() + 2 > n {
            continue;
        }
        visited[next] = true;
        path_vertices.push(next);
        path_edges.push(eid);
        dfs_paths(
            sk,
            target,
            next,
            banned_edge,
            n,
            visited,
            path_vertices,
            path_edges,
            found,
        );
        path_edges.pop();
        path_vertices.pop();
        visited[next] = false;
    }
}

/// Circuit count at threshold `n` for every edge of the 1-skeleton.
pub fn fineness_report(x: &ChainComplex, n: usize) -> Result<Vec<(BasisId, usize)>> {
    let edges = match x.basis(1) {
        Some(b) => b,
        None => return Ok(Vec::new()),
    };
    let mut out = Vec::with_capacity(edges.size());
    for e in edges.ids() {
        out.push((e, circuits_through_edge(x, e, n)?.len()));
    }
    Ok(out)
}

/// Every cell of `small` appears in `large` with the same label-level
/// boundary; used to check radius monotonicity of the truncations.
pub fn is_subcomplex(small: &ChainComplex, large: &ChainComplex) -> bool {
    if small.top_degree() > large.top_degree() {
        return false;
    }
    for d in 0..=small.top_degree() {
        let (sb, lb) = match (small.basis(d), large.basis(d)) {
            (Some(s), Some(l)) => (s, l),
            _ => return false,
        };
        for id in sb.ids() {
            let label = sb.label(id);
            let lid = match lb.id_of(label) {
                Some(i) => i,
                None => return false,
            };
            if d >= 1 {
                let scol = small.boundary(d).unwrap().column(id).unwrap();
                let lcol = large.boundary(d).unwrap().column(lid).unwrap();
                let sterms: BTreeMap<&str, String> = scol
                    .iter()
                    .map(|(t, c)| (small.basis(d - 1).unwrap().label(t), c.to_string()))
                    .collect();
                let lterms: BTreeMap<&str, String> = lcol
                    .iter()
                    .map(|(t, c)| (large.basis(d - 1).unwrap().label(t), c.to_string()))
                    .collect();
                if sterms != lterms {
                    return false;
                }
            }
        }
    }
    true
}
