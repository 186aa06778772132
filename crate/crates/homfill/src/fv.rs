//! Filling-function evaluation: enumerate bounded-norm cycles, take the
//! largest filling norm, tabulate over a range of norms, and compute the
//! `n * B_n` upper bound from connected kernel elements.

use std::collections::BTreeSet;

use crate::chain::{same_basis, Chain, ChainComplex, ModuleMap};
use crate::connectivity::enumerate_dn_up_to;
use crate::error::{Error, Result};
use crate::filling::{FillingResult, FillingSolver};

/// Value of the filling function at one norm bound.
#[derive(Debug, Clone, PartialEq)]
pub enum FvValue {
    Finite(u64),
    /// Some cycle within the bound has no integral filling; the witness
    /// is the first such cycle in (norm, lex) order.
    Infinite { witness: Chain },
    BudgetExceeded(u64),
}

impl FvValue {
    pub fn finite(&self) -> Option<u64> {
        match self {
            FvValue::Finite(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, FvValue::Infinite { .. })
    }
}

/// Table of filling-function values for `k = 0 ..= kmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct FvTable {
    pub degree: usize,
    pub rows: Vec<FvValue>,
}

/// The bound `FV(n) <= n * B_n` extracted from connected kernel elements
/// of norm at most `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BnBound {
    pub n: u64,
    pub bn: u64,
    pub bound: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundResult {
    Finite(BnBound),
    /// Some connected kernel element has no filling.
    Infinite { witness: Chain },
}

/// Diameter in the 1-skeleton path metric; `Infinite` marks a
/// disconnected vertex set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Diameter {
    Finite(u64),
    Infinite,
}

/// All kernel elements of `map` with l1 norm at most `k`, each exactly
/// once, sorted by norm then lexicographically. Includes the zero chain.
pub fn enumerate_cycles(map: &ModuleMap, k: u64) -> Result<Vec<Chain>> {
    FillingSolver::new(map).kernel_ball(k)
}

fn fv_over_cycles(
    cycles: &[Chain],
    fill: &FillingSolver,
    budget: Option<u64>,
) -> Result<FvValue> {
    let mut max = 0u64;
    let mut exceeded = false;
    for z in cycles {
        match fill.solve(z, budget)? {
            FillingResult::Finite { norm, .. } => max = max.max(norm),
            FillingResult::Infeasible(_) => {
                return Ok(FvValue::Infinite { witness: z.clone() })
            }
            FillingResult::BudgetExceeded(b) => {
                exceeded = true;
                let _ = b;
            }
        }
    }
    if exceeded {
        Ok(FvValue::BudgetExceeded(budget.expect("budget was set")))
    } else {
        Ok(FvValue::Finite(max))
    }
}

/// The filling function of the complex at degree `d >= 1`: the largest
/// filling norm over degree-`d` cycles of norm at most `k`, filled by
/// degree-`d + 1` chains. Degree 0 is served by [`fv0`].
pub fn fv(x: &ChainComplex, d: usize, k: u64) -> Result<FvValue> {
    fv_with_budget(x, d, k, None)
}

pub fn fv_with_budget(
    x: &ChainComplex,
    d: usize,
    k: u64,
    budget: Option<u64>,
) -> Result<FvValue> {
    if d == 0 || d > x.top_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: d,
            top: x.top_degree(),
        });
    }
    let cycle_map = x.cycle_map(d)?;
    let fill_map = x.filling_map(d)?;
    let cycles = enumerate_cycles(&cycle_map, k)?;
    fv_over_cycles(&cycles, &FillingSolver::new(&fill_map), budget)
}

/// Degree-0 filling function: cycles are the kernel of the augmentation,
/// fillings are 1-chains.
pub fn fv0(x: &ChainComplex, k: u64) -> Result<FvValue> {
    fv0_with_budget(x, k, None)
}

pub fn fv0_with_budget(x: &ChainComplex, k: u64, budget: Option<u64>) -> Result<FvValue> {
    let cycle_map = x.augmentation_map();
    let fill_map = x.filling_map(0)?;
    let cycles = enumerate_cycles(&cycle_map, k)?;
    fv_over_cycles(&cycles, &FillingSolver::new(&fill_map), budget)
}

/// Rows `fv(x, d, k)` for `k = 0 ..= kmax`, computed from one cycle
/// enumeration at `kmax`. Rows are nondecreasing while finite and stay
/// `Infinite` once a cycle with no filling enters the ball.
pub fn fv_table(x: &ChainComplex, d: usize, kmax: u64, budget: Option<u64>) -> Result<FvTable> {
    if d == 0 || d > x.top_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: d,
            top: x.top_degree(),
        });
    }
    let cycle_map = x.cycle_map(d)?;
    let fill_map = x.filling_map(d)?;
    let cycles = enumerate_cycles(&cycle_map, kmax)?;
    let fill = FillingSolver::new(&fill_map);
    let results: Vec<(u64, FillingResult)> = cycles
        .iter()
        .map(|z| Ok((z.l1_norm(), fill.solve(z, budget)?)))
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(kmax as usize + 1);
    let mut cursor = 0usize;
    let mut max = 0u64;
    let mut infinite: Option<Chain> = None;
    let mut exceeded = false;
    for k in 0..=kmax {
        while cursor < results.len() && results[cursor].0 <= k {
            match &results[cursor].1 {
                FillingResult::Finite { norm, .. } => max = max.max(*norm),
                FillingResult::Infeasible(_) => {
                    if infinite.is_none() {
                        infinite = Some(cycles[cursor].clone());
                    }
                }
                FillingResult::BudgetExceeded(_) => exceeded = true,
            }
            cursor += 1;
        }
        let row = match &infinite {
            Some(w) => FvValue::Infinite { witness: w.clone() },
            None if exceeded => FvValue::BudgetExceeded(budget.expect("budget was set")),
            None => FvValue::Finite(max),
        };
        rows.push(row);
    }
    Ok(FvTable { degree: d, rows })
}

/// `B_n` and the bound `n * B_n` for the cycle map and filling map of
/// degree `d`: the largest filling norm over connected kernel elements
/// of norm at most `n`.
pub fn fv_upper_bound(x: &ChainComplex, d: usize, n: u64) -> Result<BoundResult> {
    if d == 0 || d > x.top_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: d,
            top: x.top_degree(),
        });
    }
    fv_upper_bound_maps(&x.cycle_map(d)?, &x.filling_map(d)?, n)
}

pub fn fv_upper_bound_maps(
    cycle_map: &ModuleMap,
    fill_map: &ModuleMap,
    n: u64,
) -> Result<BoundResult> {
    let fill = FillingSolver::new(fill_map);
    let mut bn = 0u64;
    for z in enumerate_dn_up_to(cycle_map, n)? {
        if !cycle_map.apply(&z)?.is_zero() {
            continue;
        }
        match fill.solve(&z, None)? {
            FillingResult::Finite { norm, .. } => bn = bn.max(norm),
            FillingResult::Infeasible(_) => return Ok(BoundResult::Infinite { witness: z }),
            FillingResult::BudgetExceeded(_) => unreachable!("no budget supplied"),
        }
    }
    Ok(BoundResult::Finite(BnBound {
        n,
        bn,
        bound: n * bn,
    }))
}

/// Diameter, in the 1-skeleton path metric, of the set of vertices
/// incident to cells in the support of `sigma` (incidence via iterated
/// boundary support).
pub fn cycle_diameter(x: &ChainComplex, sigma: &Chain) -> Result<Diameter> {
    if sigma.is_zero() {
        return Err(Error::ZeroChain);
    }
    let degree = (0..=x.top_degree())
        .find(|&d| same_basis(x.basis(d).expect("degree"), sigma.basis()))
        .ok_or_else(|| {
            Error::InvalidInput(format!(
                "basis `{}` does not belong to complex `{}`",
                sigma.basis().name(),
                x.name()
            ))
        })?;
    let mut current: BTreeSet<usize> = sigma.support().map(|id| id.0).collect();
    for d in (1..=degree).rev() {
        let map = x.boundary(d).expect("boundary");
        let mut next = BTreeSet::new();
        for &cell in &current {
            for (t, _) in map.columns()[cell].iter() {
                next.insert(t.0);
            }
        }
        current = next;
    }
    let vertices: Vec<usize> = current.into_iter().collect();
    if vertices.len() <= 1 {
        return Ok(Diameter::Finite(0));
    }

    // adjacency of the 1-skeleton
    let nv = x.size(0);
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); nv];
    if let Some(d1) = x.boundary(1) {
        for col in d1.columns() {
            let ends: Vec<usize> = col.support().map(|id| id.0).collect();
            for (i, &a) in ends.iter().enumerate() {
                for &b in ends.iter().skip(i + 1) {
                    adjacency[a].push(b);
                    adjacency[b].push(a);
                }
            }
        }
    }

    let mut diameter = 0u64;
    for &start in &vertices {
        let mut dist = vec![u64::MAX; nv];
        dist[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adjacency[v] {
                if dist[w] == u64::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        for &other in &vertices {
            if dist[other] == u64::MAX {
                return Ok(Diameter::Infinite);
            }
            diameter = diameter.max(dist[other]);
        }
    }
    Ok(Diameter::Finite(diameter))
}

/// Largest diameter of a single cell of positive degree; 0 when the
/// complex has no such cells.
pub fn max_cell_diameter(x: &ChainComplex) -> Result<Diameter> {
    let mut max = Diameter::Finite(0);
    for d in 1..=x.top_degree() {
        let basis = x.basis(d).expect("degree");
        for id in basis.ids() {
            let cell = Chain::unit(basis, id, 1)?;
            let dia = cycle_diameter(x, &cell)?;
            if dia > max {
                max = dia;
            }
        }
    }
    Ok(max)
}
