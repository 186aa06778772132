//! Relations between chains through a module map: rho-intersection,
//! rho-connectedness, decomposition of kernel elements into connected
//! parts, and enumeration of the connected chains `D_n` of a given norm.
//!
//! A chain is rho-connected when its unit parts can be ordered so that
//! each prefix meets the next unit through the map with no sign clash in
//! the source. Unit parts of a single chain never clash in the source,
//! and a prefix meets a unit exactly when one of its members does, so
//! connectedness reduces to connectivity of the graph on unit parts with
//! edges given by pairwise rho-intersection. The ordering search itself
//! is kept in the test suite as an oracle against this reduction.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::Signed;

use crate::chain::{same_basis, Basis, BasisId, Chain, ModuleMap};
use crate::error::{Error, Result};
use std::sync::Arc;

/// One signed basis element: an element of `D_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitChain {
    pub element: BasisId,
    pub sign: i8,
}

impl UnitChain {
    pub fn new(element: BasisId, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1, "unit sign must be +1 or -1");
        UnitChain { element, sign }
    }

    pub fn chain(&self, basis: &Arc<Basis>) -> Result<Chain> {
        Chain::unit(basis, self.element, self.sign)
    }
}

/// The unit parts of `x`: `|<x,s>|` copies of `sign(<x,s>) * s` for each
/// `s` in the support, in basis order. The list length is the l1 norm.
pub fn unit_parts(x: &Chain) -> Vec<UnitChain> {
    let mut out = Vec::new();
    for (id, c) in x.iter() {
        let sign = if c.is_negative() { -1 } else { 1 };
        let count = c.abs();
        let count = u64::try_from(&count).expect("coefficient too large for unit expansion");
        for _ in 0..count {
            out.push(UnitChain::new(id, sign));
        }
    }
    out
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Sign-only view of a map; the intersection relations only see signs.
pub(crate) struct SignView {
    pub(crate) cols: Vec<Vec<(usize, i8)>>,
    pub(crate) rows: Vec<Vec<(usize, i8)>>,
}

pub(crate) fn sign_view(map: &ModuleMap) -> SignView {
    let mut cols = Vec::with_capacity(map.source().size());
    let mut rows = vec![Vec::new(); map.target().size()];
    for (j, col) in map.columns().iter().enumerate() {
        let mut entries = Vec::new();
        for (t, v) in col.iter() {
            let sign = if v.is_negative() { -1 } else { 1 };
            entries.push((t.0, sign));
            rows[t.0].push((j, sign));
        }
        cols.push(entries);
    }
    SignView { cols, rows }
}

fn check_source(map: &ModuleMap, x: &Chain) -> Result<()> {
    if same_basis(x.basis(), map.source()) {
        Ok(())
    } else {
        Err(Error::BasisMismatch {
            expected: map.source().name().to_string(),
            found: x.basis().name().to_string(),
        })
    }
}

/// Image signs hit by the unit parts of `x` at each target element:
/// `(t, sign)` pairs, deduplicated.
fn image_signs(view: &SignView, x: &Chain) -> BTreeSet<(usize, i8)> {
    let mut out = BTreeSet::new();
    for (id, c) in x.iter() {
        let unit_sign: i8 = if c.is_negative() { -1 } else { 1 };
        for &(t, col_sign) in &view.cols[id.0] {
            out.insert((t, unit_sign * col_sign));
        }
    }
    out
}

/// Non-trivial rho-intersection: some unit part of `x` and some unit
/// part of `y` have images carrying opposite signs at a common target
/// element.
pub fn rho_intersects(map: &ModuleMap, x: &Chain, y: &Chain) -> Result<bool> {
    check_source(map, x)?;
    check_source(map, y)?;
    let view = sign_view(map);
    Ok(rho_intersects_view(&view, x, y))
}

fn rho_intersects_view(view: &SignView, x: &Chain, y: &Chain) -> bool {
    let xs = image_signs(view, x);
    if xs.is_empty() {
        return false;
    }
    for (id, c) in y.iter() {
        let unit_sign: i8 = if c.is_negative() { -1 } else { 1 };
        for &(t, col_sign) in &view.cols[id.0] {
            if xs.contains(&(t, -(unit_sign * col_sign))) {
                return true;
            }
        }
    }
    false
}

/// Union-find over the distinct support units of `x`, joining units whose
/// images clash at some target element.
fn support_components(view: &SignView, x: &Chain) -> (Vec<(BasisId, i8)>, UnionFind) {
    let units: Vec<(BasisId, i8)> = x
        .iter()
        .map(|(id, c)| (id, if c.is_negative() { -1 } else { 1 }))
        .collect();
    let index: std::collections::HashMap<usize, usize> = units
        .iter()
        .enumerate()
        .map(|(k, (id, _))| (id.0, k))
        .collect();
    let mut uf = UnionFind::new(units.len());
    for row in &view.rows {
        let mut plus: Vec<usize> = Vec::new();
        let mut minus: Vec<usize> = Vec::new();
        for &(col, col_sign) in row {
            if let Some(&k) = index.get(&col) {
                let image_sign = units[k].1 * col_sign;
                if image_sign > 0 {
                    plus.push(k);
                } else {
                    minus.push(k);
                }
            }
        }
        // adjacency only crosses sign groups; same-sign units connect
        // through an opposite one when it exists
        if !plus.is_empty() && !minus.is_empty() {
            let root = plus[0];
            for &k in plus.iter().skip(1).chain(minus.iter()) {
                uf.union(root, k);
            }
        }
    }
    (units, uf)
}

/// Whether `x` is rho-connected, decided by connectivity of the graph on
/// unit parts. Two copies of the same unit are never adjacent to each
/// other, so a repeated unit needs a neighbor elsewhere in the support.
pub fn is_rho_connected(map: &ModuleMap, x: &Chain) -> Result<bool> {
    check_source(map, x)?;
    if x.is_zero() {
        return Err(Error::ZeroChain);
    }
    if x.l1_norm() == 1 {
        return Ok(true);
    }
    if x.support_size() == 1 {
        // several copies of one unit; copies do not intersect each other
        return Ok(false);
    }
    let view = sign_view(map);
    let (units, mut uf) = support_components(&view, x);
    let root = uf.find(0);
    Ok((1..units.len()).all(|k| uf.find(k) == root))
}

/// Decomposes a kernel element into rho-connected kernel parts: the
/// connected components of the unit-part graph. Components are checked
/// to lie in the kernel; a failure there is a bug, not an input error.
pub fn decompose(map: &ModuleMap, z: &Chain) -> Result<Vec<Chain>> {
    check_source(map, z)?;
    let image = map.apply(z)?;
    if let Some((t, v)) = image.iter().next() {
        return Err(Error::NotInKernel {
            target: map.target().label(t).to_string(),
            value: v.to_string(),
        });
    }
    if z.is_zero() {
        return Ok(Vec::new());
    }
    let view = sign_view(map);
    let (units, mut uf) = support_components(&view, z);
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for k in 0..units.len() {
        let root = uf.find(k);
        groups.entry(root).or_default().push(k);
    }
    let mut parts: Vec<Chain> = Vec::new();
    for members in groups.values() {
        if members.len() == 1 {
            // an isolated unit contributes one part per copy
            let (id, sign) = units[members[0]];
            let copies = z.coeff(id)?.abs();
            let copies = u64::try_from(&copies).expect("coefficient too large");
            for _ in 0..copies {
                parts.push(Chain::unit(z.basis(), id, sign)?);
            }
        } else {
            let entries = members
                .iter()
                .map(|&k| (units[k].0, z.coeff(units[k].0).expect("support entry")));
            parts.push(Chain::from_entries(z.basis(), entries)?);
        }
    }
    for part in &parts {
        assert!(
            map.apply(part)?.is_zero(),
            "internal error: connected component escaped the kernel"
        );
    }
    parts.sort_by(|a, b| {
        let key = |c: &Chain| {
            let (id, coeff) = c.iter().next().expect("nonzero part");
            (id, if coeff.is_negative() { 1i8 } else { 0 })
        };
        key(a).cmp(&key(b))
    });
    Ok(parts)
}

/// Compact chain used inside the `D_n` frontier: sorted `(index, coeff)`.
type SmallChain = Vec<(usize, i32)>;

fn small_add_unit(y: &SmallChain, s: usize, sign: i8) -> SmallChain {
    let mut out = y.clone();
    match out.binary_search_by_key(&s, |&(i, _)| i) {
        Ok(pos) => out[pos].1 += sign as i32,
        Err(pos) => out.insert(pos, (s, sign as i32)),
    }
    out
}

fn small_to_chain(basis: &Arc<Basis>, y: &SmallChain) -> Chain {
    Chain::from_entries(basis, y.iter().map(|&(i, c)| (BasisId(i), BigInt::from(c))))
        .expect("indices in range")
}

/// All rho-connected chains of l1 norm exactly `n`, built level by level:
/// extend each element of `D_n` by every unit that meets it through the
/// map without a source sign clash. `D_0` is empty.
pub fn enumerate_dn(map: &ModuleMap, n: u64) -> Result<Vec<Chain>> {
    let levels = dn_levels(map, n)?;
    let mut out: Vec<Chain> = levels
        .last()
        .map(|level| {
            level
                .iter()
                .map(|y| small_to_chain(map.source(), y))
                .collect()
        })
        .unwrap_or_default();
    out.sort_by(Chain::lex_cmp);
    Ok(out)
}

/// The cumulative union `D_1 ∪ ... ∪ D_n`, ordered by norm then
/// lexicographically.
pub fn enumerate_dn_up_to(map: &ModuleMap, n: u64) -> Result<Vec<Chain>> {
    let levels = dn_levels(map, n)?;
    let mut out = Vec::new();
    for level in levels {
        let mut chains: Vec<Chain> = level
            .iter()
            .map(|y| small_to_chain(map.source(), y))
            .collect();
        chains.sort_by(Chain::lex_cmp);
        out.extend(chains);
    }
    Ok(out)
}

fn dn_levels(map: &ModuleMap, n: u64) -> Result<Vec<Vec<SmallChain>>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let view = sign_view(map);
    let sdim = map.source().size();
    let mut levels: Vec<Vec<SmallChain>> = Vec::new();
    let mut current: Vec<SmallChain> = Vec::new();
    for s in 0..sdim {
        current.push(vec![(s, 1)]);
        current.push(vec![(s, -1)]);
    }
    current.sort();
    levels.push(current);
    for _ in 1..n {
        let prev = levels.last().expect("previous level");
        let mut next: HashSet<SmallChain> = HashSet::new();
        for y in prev {
            for &(s, c) in y.iter() {
                let unit_sign: i8 = if c < 0 { -1 } else { 1 };
                for &(t, col_sign) in &view.cols[s] {
                    let image_sign = unit_sign * col_sign;
                    for &(s2, col_sign2) in &view.rows[t] {
                        // unit (s2, sign2) meets (s, unit_sign) at t
                        let sign2 = -image_sign * col_sign2;
                        let existing = y
                            .binary_search_by_key(&s2, |&(i, _)| i)
                            .map(|pos| y[pos].1)
                            .unwrap_or(0);
                        if existing * (sign2 as i32) < 0 {
                            continue; // source sign clash
                        }
                        next.insert(small_add_unit(y, s2, sign2));
                    }
                }
            }
        }
        let mut next: Vec<SmallChain> = next.into_iter().collect();
        next.sort();
        levels.push(next);
    }
    Ok(levels)
}

/// The units that have non-trivial rho-intersection with `y` (finite by
/// construction on finite bases). Empty for the zero chain.
pub fn d1_neighbors(map: &ModuleMap, y: &Chain) -> Result<Vec<UnitChain>> {
    check_source(map, y)?;
    let view = sign_view(map);
    let mut out = BTreeSet::new();
    for (id, c) in y.iter() {
        let unit_sign: i8 = if c.is_negative() { -1 } else { 1 };
        for &(t, col_sign) in &view.cols[id.0] {
            let image_sign = unit_sign * col_sign;
            for &(s2, col_sign2) in &view.rows[t] {
                out.insert(UnitChain::new(BasisId(s2), -image_sign * col_sign2));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// All source basis elements whose column hits `t` (the set `S(t)`).
pub fn target_support(map: &ModuleMap, t: BasisId) -> Result<Vec<BasisId>> {
    map.target_support(t)
}
