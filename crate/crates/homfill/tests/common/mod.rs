//! Shared oracles for the integration suites: a literal ordering search
//! for connectedness, exhaustive chain enumeration over small supports,
//! and a tiny deterministic generator for sampled inputs.
#![allow(dead_code)] // each test binary uses its own subset

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;

use homfill::chain::Basis;
use homfill::connectivity::unit_parts;
use homfill::{rho_intersects, BasisId, Chain, ModuleMap};

/// Literal definition of connectedness: search for an ordering of the
/// unit parts in which every prefix meets the next unit through the map
/// and never clashes with it in the source. Failure states are memoized
/// on the set of used units, since a prefix is exactly the sum of the
/// units chosen so far.
pub fn ordering_search_connected(map: &ModuleMap, x: &Chain) -> bool {
    let units = unit_parts(x);
    let n = units.len();
    assert!(n > 0, "ordering search is undefined for the zero chain");
    assert!(n <= 62, "too many unit parts for the bitmask search");
    if n == 1 {
        return true;
    }
    let basis = x.basis();
    let chains: Vec<Chain> = units.iter().map(|u| u.chain(basis).unwrap()).collect();

    fn extend(
        map: &ModuleMap,
        chains: &[Chain],
        prefix: &Chain,
        mask: u64,
        full: u64,
        dead: &mut HashSet<u64>,
    ) -> bool {
        if mask == full {
            return true;
        }
        if dead.contains(&mask) {
            return false;
        }
        let mut tried: HashSet<String> = HashSet::new();
        for (i, unit) in chains.iter().enumerate() {
            if mask & (1 << i) != 0 {
                continue;
            }
            if !tried.insert(unit.term_string()) {
                continue; // identical copies give identical subtrees
            }
            if !prefix.s_intersection(unit).unwrap().is_empty() {
                continue;
            }
            if !rho_intersects(map, prefix, unit).unwrap() {
                continue;
            }
            let next = prefix.add(unit).unwrap();
            if extend(map, chains, &next, mask | (1 << i), full, dead) {
                return true;
            }
        }
        dead.insert(mask);
        false
    }

    let full = (1u64 << n) - 1;
    let mut dead = HashSet::new();
    let mut tried: HashSet<String> = HashSet::new();
    for (i, first) in chains.iter().enumerate() {
        if !tried.insert(first.term_string()) {
            continue;
        }
        if extend(map, &chains, first, 1 << i, full, &mut dead) {
            return true;
        }
    }
    false
}

/// Every chain supported on `ids` with l1 norm at most `max_norm`,
/// including the zero chain.
pub fn all_chains(basis: &Arc<Basis>, ids: &[BasisId], max_norm: u64) -> Vec<Chain> {
    let mut out = Vec::new();
    let mut current: Vec<(BasisId, i64)> = Vec::new();
    fn recurse(
        basis: &Arc<Basis>,
        ids: &[BasisId],
        pos: usize,
        remaining: i64,
        current: &mut Vec<(BasisId, i64)>,
        out: &mut Vec<Chain>,
    ) {
        if pos == ids.len() {
            out.push(
                Chain::from_entries(
                    basis,
                    current.iter().map(|&(id, c)| (id, BigInt::from(c))),
                )
                .unwrap(),
            );
            return;
        }
        for c in -remaining..=remaining {
            if c != 0 {
                current.push((ids[pos], c));
            }
            recurse(basis, ids, pos + 1, remaining - c.abs(), current, out);
            if c != 0 {
                current.pop();
            }
        }
    }
    recurse(basis, ids, 0, max_norm as i64, &mut current, &mut out);
    out
}

/// Exhaustive kernel elements over small bases, independent of any
/// Smith-normal-form machinery.
pub fn brute_cycles(map: &ModuleMap, k: u64) -> Vec<Chain> {
    let ids: Vec<BasisId> = map.source().ids().collect();
    all_chains(map.source(), &ids, k)
        .into_iter()
        .filter(|z| map.apply(z).unwrap().is_zero())
        .collect()
}

/// Split-mix style deterministic generator for sampled test inputs.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    /// Random chain of l1 norm at most `max_norm` (cancellation may
    /// shrink it further).
    pub fn chain(&mut self, basis: &Arc<Basis>, max_norm: u64) -> Chain {
        let steps = self.below(max_norm + 1);
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for _ in 0..steps {
            let id = self.below(basis.size() as u64) as usize;
            let sign = if self.below(2) == 0 { 1 } else { -1 };
            *acc.entry(id).or_insert(0) += sign;
        }
        Chain::from_entries(
            basis,
            acc.into_iter().map(|(i, c)| (BasisId(i), BigInt::from(c))),
        )
        .unwrap()
    }
}
