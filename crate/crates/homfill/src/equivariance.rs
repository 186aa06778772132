//! Finite groups acting by paired basis permutations, equivariance
//! checking, orbits and stabilizers, and orbit-level enumeration of
//! connected chains with the resulting `B_n` cross-check.

use std::collections::{BTreeMap, BTreeSet, HashSet};


use num_bigint::BigInt;

use crate::chain::{BasisId, Chain, ModuleMap};
use crate::connectivity::{sign_view, UnionFind};
use crate::error::{Error, Result};
use crate::filling::{FillingResult, FillingSolver};
use crate::fv::{BnBound, BoundResult};

/// A permutation of `0..n` in image notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidAction(format!(
                    "images {images:?} are not a permutation"
                )));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `(self.compose(other)).apply(x) == self.apply(other.apply(x))`
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }
}

/// Which side of a map an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

/// A finite group given as an explicit list of elements, each acting by
/// a permutation of the source basis paired with one of the target
/// basis. Element `identity` must be the identity pair.
#[derive(Debug, Clone)]
pub struct PermutationAction {
    source: Vec<Perm>,
    target: Vec<Perm>,
    identity: usize,
}

impl PermutationAction {
    pub fn new(elements: Vec<(Perm, Perm)>, identity: usize) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidAction("empty element list".to_string()));
        }
        let (slen, tlen) = (elements[0].0.len(), elements[0].1.len());
        for (s, t) in &elements {
            if s.len() != slen || t.len() != tlen {
                return Err(Error::InvalidAction(
                    "inconsistent permutation sizes".to_string(),
                ));
            }
        }
        if identity >= elements.len()
            || !elements[identity].0.is_identity()
            || !elements[identity].1.is_identity()
        {
            return Err(Error::InvalidAction(
                "identity index does not point at the identity pair".to_string(),
            ));
        }
        let (source, target) = elements.into_iter().unzip();
        Ok(PermutationAction {
            source,
            target,
            identity,
        })
    }

    pub fn trivial(source_size: usize, target_size: usize) -> Self {
        PermutationAction {
            source: vec![Perm::identity(source_size)],
            target: vec![Perm::identity(target_size)],
            identity: 0,
        }
    }

    /// Closure of a generating set under composition, identity included.
    pub fn from_generators(generators: Vec<(Perm, Perm)>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidAction("no generators".to_string()));
        }
        let (slen, tlen) = (generators[0].0.len(), generators[0].1.len());
        for (s, t) in &generators {
            if s.len() != slen || t.len() != tlen {
                return Err(Error::InvalidAction(
                    "inconsistent permutation sizes".to_string(),
                ));
            }
        }
        let mut elements: Vec<(Perm, Perm)> =
            vec![(Perm::identity(slen), Perm::identity(tlen))];
        let mut seen: HashSet<(Perm, Perm)> = elements.iter().cloned().collect();
        let mut frontier = elements.clone();
        while let Some((s, t)) = frontier.pop() {
            for (gs, gt) in &generators {
                let ns = gs.compose(&s);
                let nt = gt.compose(&t);
                let pair = (ns, nt);
                if seen.insert(pair.clone()) {
                    elements.push(pair.clone());
                    frontier.push(pair);
                }
            }
        }
        PermutationAction::new(elements, 0)
    }

    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn source_perm(&self, g: usize) -> &Perm {
        &self.source[g]
    }

    pub fn target_perm(&self, g: usize) -> &Perm {
        &self.target[g]
    }

    pub fn closed_under_composition(&self) -> bool {
        let set: HashSet<(&Perm, &Perm)> =
            self.source.iter().zip(self.target.iter()).collect();
        for (s1, t1) in self.source.iter().zip(self.target.iter()) {
            for (s2, t2) in self.source.iter().zip(self.target.iter()) {
                if !set.contains(&(&s1.compose(s2), &t1.compose(t2))) {
                    return false;
                }
            }
        }
        true
    }

    fn perms(&self, side: Side) -> &[Perm] {
        match side {
            Side::Source => &self.source,
            Side::Target => &self.target,
        }
    }

    /// Translate a chain over the source basis by group element `g`.
    pub fn apply_source(&self, g: usize, x: &Chain) -> Result<Chain> {
        self.apply_side(Side::Source, g, x)
    }

    pub fn apply_target(&self, g: usize, x: &Chain) -> Result<Chain> {
        self.apply_side(Side::Target, g, x)
    }

    fn apply_side(&self, side: Side, g: usize, x: &Chain) -> Result<Chain> {
        let perm = &self.perms(side)[g];
        if perm.len() != x.basis().size() {
            return Err(Error::InvalidAction(format!(
                "permutation size {} does not match basis `{}`",
                perm.len(),
                x.basis().name()
            )));
        }
        Chain::from_entries(
            x.basis(),
            x.iter().map(|(id, c)| (BasisId(perm.apply(id.0)), c.clone())),
        )
    }
}

/// Whether every listed element satisfies `map(g s) = g map(s)`.
pub fn check_equivariance(map: &ModuleMap, action: &PermutationAction) -> Result<bool> {
    if action.source[0].len() != map.source().size()
        || action.target[0].len() != map.target().size()
    {
        return Err(Error::InvalidAction(format!(
            "action sizes {}/{} do not match map {}/{}",
            action.source[0].len(),
            action.target[0].len(),
            map.source().size(),
            map.target().size()
        )));
    }
    for g in 0..action.len() {
        for s in map.source().ids() {
            let moved = map.column(BasisId(action.source[g].apply(s.0)))?;
            let pushed = action.apply_target(g, map.column(s)?)?;
            if *moved != pushed {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Orbit partition of one side of the action, each orbit sorted, orbits
/// ordered by their least element.
pub fn orbits(action: &PermutationAction, side: Side) -> Vec<Vec<BasisId>> {
    let perms = action.perms(side);
    let n = perms.first().map_or(0, Perm::len);
    let mut uf = UnionFind::new(n);
    for perm in perms {
        for i in 0..n {
            uf.union(i, perm.apply(i));
        }
    }
    let mut groups: BTreeMap<usize, Vec<BasisId>> = BTreeMap::new();
    for i in 0..n {
        groups.entry(uf.find(i)).or_default().push(BasisId(i));
    }
    groups.into_values().collect()
}

/// Number of listed elements fixing the given basis element.
pub fn stabilizer_order(action: &PermutationAction, side: Side, id: BasisId) -> Result<usize> {
    let perms = action.perms(side);
    let n = perms.first().map_or(0, Perm::len);
    if id.0 >= n {
        return Err(Error::InvalidAction(format!(
            "element {} out of range for permutations of size {n}",
            id.0
        )));
    }
    Ok(perms.iter().filter(|p| p.apply(id.0) == id.0).count())
}

fn canonical_orbit_rep(action: &PermutationAction, x: &Chain) -> Result<Chain> {
    let mut best = x.clone();
    for g in 0..action.len() {
        let moved = action.apply_source(g, x)?;
        if moved.lex_cmp(&best) == std::cmp::Ordering::Less {
            best = moved;
        }
    }
    Ok(best)
}

/// One representative per orbit of the connected chains of norm exactly
/// `n`, built inductively: extend each lower representative by every
/// unit that meets it without a source sign clash, then canonicalize.
/// Representatives are the lexicographically least chains of their
/// orbits, sorted.
pub fn dn_orbit_representatives(
    map: &ModuleMap,
    action: &PermutationAction,
    n: u64,
) -> Result<Vec<Chain>> {
    Ok(dn_orbit_levels(map, action, n)?.pop().unwrap_or_default())
}

fn dn_orbit_levels(
    map: &ModuleMap,
    action: &PermutationAction,
    n: u64,
) -> Result<Vec<Vec<Chain>>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let source = map.source();
    let view = sign_view(map);
    let mut levels: Vec<Vec<Chain>> = Vec::new();

    let mut first: BTreeSet<String> = BTreeSet::new();
    let mut level1: Vec<Chain> = Vec::new();
    for s in source.ids() {
        for sign in [1i8, -1] {
            let rep = canonical_orbit_rep(action, &Chain::unit(source, s, sign)?)?;
            if first.insert(rep.term_string()) {
                level1.push(rep);
            }
        }
    }
    level1.sort_by(Chain::lex_cmp);
    levels.push(level1);

    for _ in 1..n {
        let prev = levels.last().expect("previous level");
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut next: Vec<Chain> = Vec::new();
        for y in prev {
            for (id, c) in y.iter() {
                let unit_sign: i8 = if c < &BigInt::from(0) { -1 } else { 1 };
                for &(t, col_sign) in &view.cols[id.0] {
                    let image_sign = unit_sign * col_sign;
                    for &(s2, col_sign2) in &view.rows[t] {
                        let sign2 = -image_sign * col_sign2;
                        let existing = y.coeff(BasisId(s2))?;
                        if existing.sign() == (-BigInt::from(sign2)).sign()
                            && !existing.is_zero()
                        {
                            continue;
                        }
                        let unit = Chain::unit(source, BasisId(s2), sign2)?;
                        let rep = canonical_orbit_rep(action, &y.add(&unit)?)?;
                        if seen.insert(rep.term_string()) {
                            next.push(rep);
                        }
                    }
                }
            }
        }
        next.sort_by(Chain::lex_cmp);
        levels.push(next);
    }
    Ok(levels)
}

use num_traits::Zero;

/// `B_n` computed over orbit representatives only; equals the full
/// enumeration under a validated equivariant action.
pub fn bn_via_orbits(
    cycle_map: &ModuleMap,
    fill_map: &ModuleMap,
    action: &PermutationAction,
    n: u64,
) -> Result<BoundResult> {
    let fill = FillingSolver::new(fill_map);
    let mut bn = 0u64;
    for level in dn_orbit_levels(cycle_map, action, n)? {
        for z in level {
            if !cycle_map.apply(&z)?.is_zero() {
                continue;
            }
            match fill.solve(&z, None)? {
                FillingResult::Finite { norm, .. } => bn = bn.max(norm),
                FillingResult::Infeasible(_) => {
                    return Ok(BoundResult::Infinite { witness: z })
                }
                FillingResult::BudgetExceeded(_) => unreachable!("no budget supplied"),
            }
        }
    }
    Ok(BoundResult::Finite(BnBound {
        n,
        bn,
        bound: n * bn,
    }))
}

/// Parses an action file: `action <name>`, then for each generator an
/// `element` line followed by `source:` and `target:` lines in image
/// notation (`1 2 0`) or cycle notation (`(0 1 2)`). The group is the
/// closure of the listed generators.
pub fn parse_action(
    text: &str,
    source_size: usize,
    target_size: usize,
) -> Result<PermutationAction> {
    let mut generators: Vec<(Perm, Perm)> = Vec::new();
    let mut pending_source: Option<Perm> = None;
    let mut pending_target: Option<Perm> = None;
    let mut saw_element = false;

    let flush = |src: &mut Option<Perm>,
                 tgt: &mut Option<Perm>,
                 out: &mut Vec<(Perm, Perm)>|
     -> Result<()> {
        match (src.take(), tgt.take()) {
            (None, None) => Ok(()),
            (Some(s), Some(t)) => {
                out.push((s, t));
                Ok(())
            }
            _ => Err(Error::InvalidAction(
                "each element needs both a source and a target line".to_string(),
            )),
        }
    };

    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("action") {
            let _ = rest;
            continue;
        }
        if line == "element" {
            flush(&mut pending_source, &mut pending_target, &mut generators)?;
            saw_element = true;
            continue;
        }
        if let Some(spec) = line.strip_prefix("source:") {
            pending_source = Some(parse_perm(spec.trim(), source_size)?);
            continue;
        }
        if let Some(spec) = line.strip_prefix("target:") {
            pending_target = Some(parse_perm(spec.trim(), target_size)?);
            continue;
        }
        return Err(Error::InvalidAction(format!("unexpected line `{line}`")));
    }
    flush(&mut pending_source, &mut pending_target, &mut generators)?;
    if !saw_element && generators.is_empty() {
        return Err(Error::InvalidAction("no elements listed".to_string()));
    }
    if generators.is_empty() {
        // an identity-only file is the trivial group
        return Ok(PermutationAction::trivial(source_size, target_size));
    }
    PermutationAction::from_generators(generators)
}

fn parse_perm(spec: &str, size: usize) -> Result<Perm> {
    let mut images: Vec<usize>;
    if spec.starts_with('(') {
        images = (0..size).collect();
        for cycle in spec.split(')') {
            let cycle = cycle.trim().trim_start_matches('(').trim();
            if cycle.is_empty() {
                continue;
            }
            let members: Vec<usize> = cycle
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::InvalidAction(format!("bad cycle entry `{t}`")))
                })
                .collect::<Result<_>>()?;
            for w in members.windows(2) {
                if w[0] >= size || w[1] >= size {
                    return Err(Error::InvalidAction(format!(
                        "cycle entry out of range in `{spec}`"
                    )));
                }
                images[w[0]] = w[1];
            }
            if members.len() > 1 {
                images[*members.last().unwrap()] = members[0];
            }
        }
    } else {
        images = spec
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidAction(format!("bad image entry `{t}`")))
            })
            .collect::<Result<_>>()?;
        if images.len() != size {
            return Err(Error::InvalidAction(format!(
                "permutation of size {} does not match basis size {size}",
                images.len()
            )));
        }
    }
    Perm::new(images)
}

/// Rotation of the cycle graph `v_i -> v_{i+1}` as a source/target pair
/// for its boundary map.
pub fn cycle_rotation(n: usize) -> (Perm, Perm) {
    let shift: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    (
        Perm::new(shift.clone()).expect("rotation"),
        Perm::new(shift).expect("rotation"),
    )
}
