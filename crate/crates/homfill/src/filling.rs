//! Exact filling norms: minimum-l1 integer preimages under a module map.
//!
//! Feasibility over the integers is decided by Smith normal form; an
//! infeasible target gets a self-contained certificate (a functional that
//! kills the image modulo `m` but not the target). The minimum itself is
//! found by branch-and-bound over the affine solution lattice, with
//! rigorous per-coordinate boxes derived from exact rational dual
//! functionals. [`filling_norm_oracle`] is a deliberately independent
//! exhaustive search used to cross-check the solver.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::chain::{same_basis, Basis, BasisId, Chain, ModuleMap};
use crate::error::{Error, Result};
use crate::matrix::{lll_reduce, smith, solve_rational, IntMatrix, Smith};

/// Smith normal form `u * a * v = d` of the matrix of a module map,
/// rows indexed by the target basis and columns by the source basis.
#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    smith: Smith,
}

impl SnfDecomposition {
    pub fn u(&self) -> &IntMatrix {
        &self.smith.u
    }

    pub fn v(&self) -> &IntMatrix {
        &self.smith.v
    }

    /// Elementary divisors `d1 | d2 | ...`, zeros trailing.
    pub fn diagonal(&self) -> &[BigInt] {
        &self.smith.diag
    }

    pub fn rank(&self) -> usize {
        self.smith.rank
    }

    /// Recomputes `u * a * v = d`, unimodularity and the divisibility
    /// chain against the map the decomposition came from.
    pub fn verify(&self, map: &ModuleMap) -> bool {
        self.smith.verify(&map_matrix(map))
    }
}

pub(crate) fn map_matrix(map: &ModuleMap) -> IntMatrix {
    let mut m = IntMatrix::zeros(map.target().size(), map.source().size());
    for (j, col) in map.columns().iter().enumerate() {
        for (t, v) in col.iter() {
            m.set(t.0, j, v.clone());
        }
    }
    m
}

pub fn smith_normal_form(map: &ModuleMap) -> SnfDecomposition {
    SnfDecomposition {
        smith: smith(&map_matrix(map)),
    }
}

/// Certificate that `map(mu) = z` has no integer solution: a functional
/// over the target basis with `functional . map(s) = 0 (mod modulus)` for
/// every source element `s` while `functional . z != 0 (mod modulus)`.
/// `modulus = 0` encodes exact-zero (rank) obstructions.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstruction {
    pub functional: Chain,
    pub modulus: BigInt,
    pub value: BigInt,
}

fn congruent_zero(x: &BigInt, modulus: &BigInt) -> bool {
    if modulus.is_zero() {
        x.is_zero()
    } else {
        (x % modulus).is_zero()
    }
}

impl Obstruction {
    /// Recomputes the certificate against the map and target.
    pub fn verify(&self, map: &ModuleMap, z: &Chain) -> bool {
        if !same_basis(self.functional.basis(), map.target())
            || !same_basis(z.basis(), map.target())
        {
            return false;
        }
        for col in map.columns() {
            if !congruent_zero(&self.functional.dot(col), &self.modulus) {
                return false;
            }
        }
        let v = self.functional.dot(z);
        v == self.value && !congruent_zero(&v, &self.modulus)
    }
}

impl std::fmt::Display for Obstruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "mod {} functional {}", self.modulus, self.functional)
    }
}

/// Outcome of the integer feasibility test, with a full parametrization
/// of the solution set on success.
#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Solvable {
        particular: Chain,
        kernel_basis: Vec<Chain>,
    },
    Obstructed(Obstruction),
}

/// Result of a filling-norm computation.
#[derive(Debug, Clone, PartialEq)]
pub enum FillingResult {
    Finite { norm: u64, witness: Chain },
    Infeasible(Obstruction),
    BudgetExceeded(u64),
}

impl FillingResult {
    pub fn finite_norm(&self) -> Option<u64> {
        match self {
            FillingResult::Finite { norm, .. } => Some(*norm),
            _ => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, FillingResult::Infeasible(_))
    }
}

/// Rows are settled once no later lattice vector can change them;
/// `at[j]` lists the rows that become final when the search reaches
/// depth `j`.
struct Settlement {
    at: Vec<Vec<usize>>,
}

impl Settlement {
    fn new(dim: usize, basis: &[Vec<BigInt>]) -> Self {
        let r = basis.len();
        let mut at = vec![Vec::new(); r + 1];
        for row in 0..dim {
            let mut last: Option<usize> = None;
            for (j, v) in basis.iter().enumerate() {
                if !v[row].is_zero() {
                    last = Some(j);
                }
            }
            match last {
                None => at[0].push(row),
                Some(j) => at[j + 1].push(row),
            }
        }
        Settlement { at }
    }
}

/// Precomputed solver for many targets under one map: Smith data plus an
/// LLL-reduced kernel basis and exact dual functionals for box bounds.
pub struct FillingSolver {
    source: Arc<Basis>,
    target: Arc<Basis>,
    snf: Smith,
    kernel: Vec<Vec<BigInt>>,
    lambda: Vec<Vec<BigRational>>,
    lambda_inf: Vec<BigRational>,
    settle: Settlement,
}

fn rational(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

impl FillingSolver {
    pub fn new(map: &ModuleMap) -> Self {
        let a = map_matrix(map);
        let snf = smith(&a);
        let dim = map.source().size();
        let mut kernel: Vec<Vec<BigInt>> = (snf.rank..dim).map(|j| snf.v.col_vec(j)).collect();
        lll_reduce(&mut kernel);
        // settle rows as early as possible: vectors whose support closes
        // first go first
        kernel.sort_by_key(|v| {
            let last = v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, _)| i)
                .max()
                .unwrap_or(0);
            (last, v.clone())
        });
        let (lambda, lambda_inf) = dual_functionals(&kernel, dim);
        let settle = Settlement::new(dim, &kernel);
        FillingSolver {
            source: Arc::clone(map.source()),
            target: Arc::clone(map.target()),
            snf,
            kernel,
            lambda,
            lambda_inf,
            settle,
        }
    }

    pub fn kernel_rank(&self) -> usize {
        self.kernel.len()
    }

    /// Kernel basis as chains over the source basis.
    pub fn kernel_basis(&self) -> Vec<Chain> {
        self.kernel
            .iter()
            .map(|v| Chain::from_dense(&self.source, v))
            .collect()
    }

    fn check_target(&self, z: &Chain) -> Result<()> {
        if same_basis(z.basis(), &self.target) {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                expected: self.target.name().to_string(),
                found: z.basis().name().to_string(),
            })
        }
    }

    /// Integer feasibility of `map(mu) = z` with either a particular
    /// solution or a certificate.
    pub fn feasibility(&self, z: &Chain) -> Result<Feasibility> {
        match self.particular_solution(z)? {
            Ok(mu0) => Ok(Feasibility::Solvable {
                particular: Chain::from_dense(&self.source, &mu0),
                kernel_basis: self.kernel_basis(),
            }),
            Err(obstruction) => Ok(Feasibility::Obstructed(obstruction)),
        }
    }

    fn particular_solution(
        &self,
        z: &Chain,
    ) -> Result<std::result::Result<Vec<BigInt>, Obstruction>> {
        self.check_target(z)?;
        let w = self.snf.u.mul_vec(&z.to_dense());
        let rows = self.snf.rows;
        let cols = self.snf.cols;
        let mut y = vec![BigInt::zero(); cols];
        for i in 0..rows {
            let d = self.snf.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if d.is_zero() {
                if !w[i].is_zero() {
                    return Ok(Err(self.obstruction(i, BigInt::zero(), z)));
                }
            } else {
                if !(&w[i] % &d).is_zero() {
                    return Ok(Err(self.obstruction(i, d, z)));
                }
                if i < cols {
                    y[i] = &w[i] / &d;
                }
            }
        }
        Ok(Ok(self.snf.v.mul_vec(&y)))
    }

    fn obstruction(&self, row: usize, modulus: BigInt, z: &Chain) -> Obstruction {
        let functional = Chain::from_dense(&self.target, self.snf.u.row(row));
        let value = functional.dot(z);
        Obstruction {
            functional,
            modulus,
            value,
        }
    }

    /// Exact minimum-l1 solution of `map(mu) = z`, or the infeasibility
    /// certificate. With a budget, `BudgetExceeded` is returned exactly
    /// when the true minimum is proven to exceed it.
    pub fn solve(&self, z: &Chain, budget: Option<u64>) -> Result<FillingResult> {
        let mu0 = match self.particular_solution(z)? {
            Ok(v) => v,
            Err(obstruction) => return Ok(FillingResult::Infeasible(obstruction)),
        };
        let reduced = self.reduce_near_origin(mu0);
        let incumbent = l1(&reduced);
        let cap0 = match budget {
            Some(b) => incumbent.clone().min(BigInt::from(b)),
            None => incumbent.clone(),
        };

        let best = self.branch_and_bound(&reduced, &cap0);
        match best {
            Some((norm, vec)) => {
                let norm = norm.to_u64().expect("filling norm exceeds u64");
                Ok(FillingResult::Finite {
                    norm,
                    witness: Chain::from_dense(&self.source, &vec),
                })
            }
            None => Ok(FillingResult::BudgetExceeded(
                budget.expect("search exhausted without budget"),
            )),
        }
    }

    /// All kernel lattice points of l1 norm at most `k`, each exactly
    /// once, sorted by norm then lexicographically. Enumerates integer
    /// coefficient vectors over the reduced kernel basis inside rigorous
    /// per-coordinate boxes, pruning on rows no later vector can change.
    pub fn kernel_ball(&self, k: u64) -> Result<Vec<Chain>> {
        let dim = self.source.size();
        let mut out: Vec<Vec<i64>> = Vec::new();
        if self.kernel.is_empty() {
            out.push(vec![0; dim]);
        } else {
            let mut basis: Vec<Vec<i64>> = Vec::with_capacity(self.kernel.len());
            for v in &self.kernel {
                let row: Option<Vec<i64>> = v.iter().map(ToPrimitive::to_i64).collect();
                basis.push(row.ok_or_else(|| {
                    Error::CoefficientTooLarge("kernel basis entry".to_string())
                })?);
            }
            let radius = rational(&BigInt::from(k));
            let boxes: Vec<i64> = self
                .lambda_inf
                .iter()
                .map(|inf| {
                    (inf * &radius)
                        .floor()
                        .to_integer()
                        .to_i64()
                        .unwrap_or(i64::MAX)
                })
                .collect();

            fn walk(
                basis: &[Vec<i64>],
                boxes: &[i64],
                settle: &Settlement,
                k: i64,
                depth: usize,
                partial: &mut Vec<i64>,
                settled: i64,
                out: &mut Vec<Vec<i64>>,
            ) {
                let mut settled = settled;
                for &row in &settle.at[depth] {
                    settled += partial[row].abs();
                }
                if settled > k {
                    return;
                }
                if depth == basis.len() {
                    out.push(partial.clone());
                    return;
                }
                let bound = boxes[depth];
                let vec = &basis[depth];
                for (i, x) in vec.iter().enumerate() {
                    partial[i] -= bound * x;
                }
                let mut c = -bound;
                loop {
                    walk(basis, boxes, settle, k, depth + 1, partial, settled, out);
                    if c == bound {
                        break;
                    }
                    c += 1;
                    for (i, x) in vec.iter().enumerate() {
                        partial[i] += x;
                    }
                }
                for (i, x) in vec.iter().enumerate() {
                    partial[i] -= bound * x;
                }
            }

            let mut partial = vec![0i64; dim];
            walk(
                &basis,
                &boxes,
                &self.settle,
                k as i64,
                0,
                &mut partial,
                0,
                &mut out,
            );
        }
        let mut chains: Vec<Chain> = out
            .into_iter()
            .map(|v| {
                Chain::from_entries(
                    &self.source,
                    v.iter()
                        .enumerate()
                        .filter(|(_, &x)| x != 0)
                        .map(|(i, &x)| (BasisId(i), BigInt::from(x))),
                )
                .expect("in range")
            })
            .collect();
        chains.sort_by(|a, b| {
            a.l1_norm()
                .cmp(&b.l1_norm())
                .then_with(|| a.lex_cmp(b))
        });
        Ok(chains)
    }

    /// Babai rounding against the dual functionals followed by greedy
    /// single-vector descent; only the quality of the bound depends on
    /// this, not correctness.
    fn reduce_near_origin(&self, mut mu: Vec<BigInt>) -> Vec<BigInt> {
        if self.kernel.is_empty() {
            return mu;
        }
        for (j, lam) in self.lambda.iter().enumerate() {
            let mut c = BigRational::zero();
            for (i, x) in mu.iter().enumerate() {
                if !x.is_zero() {
                    c += rational(x) * &lam[i];
                }
            }
            let q = round_to_int(&c);
            if !q.is_zero() {
                for (i, k) in self.kernel[j].iter().enumerate() {
                    if !k.is_zero() {
                        mu[i] -= &q * k;
                    }
                }
            }
        }
        loop {
            let cur = l1(&mu);
            let mut improved = false;
            for k in &self.kernel {
                for sign in [1i64, -1] {
                    let cand: Vec<BigInt> = mu
                        .iter()
                        .zip(k)
                        .map(|(a, b)| a + BigInt::from(sign) * b)
                        .collect();
                    if l1(&cand) < cur {
                        mu = cand;
                        improved = true;
                        break;
                    }
                }
                if improved {
                    break;
                }
            }
            if !improved {
                return mu;
            }
        }
    }

    fn branch_and_bound(
        &self,
        origin: &[BigInt],
        cap0: &BigInt,
    ) -> Option<(BigInt, Vec<BigInt>)> {
        let r = self.kernel.len();
        let mut boxes = Vec::with_capacity(r);
        for j in 0..r {
            let mut shift = BigRational::zero();
            for (i, x) in origin.iter().enumerate() {
                if !x.is_zero() {
                    shift += rational(x) * &self.lambda[j][i];
                }
            }
            let radius = &self.lambda_inf[j] * rational(cap0);
            let lo = (-&shift - &radius).ceil().to_integer();
            let hi = (-&shift + &radius).floor().to_integer();
            boxes.push((lo, hi));
        }

        struct State<'a> {
            solver: &'a FillingSolver,
            boxes: Vec<(BigInt, BigInt)>,
            budget_cap: BigInt,
            best: Option<(BigInt, Vec<BigInt>)>,
        }

        fn descend(st: &mut State, depth: usize, partial: &mut Vec<BigInt>, settled: BigInt) {
            let mut settled = settled;
            for &row in &st.solver.settle.at[depth] {
                settled += partial[row].abs();
            }
            let cap = match &st.best {
                Some((b, _)) => b.clone().min(st.budget_cap.clone()),
                None => st.budget_cap.clone(),
            };
            if settled > cap {
                return;
            }
            if depth == st.solver.kernel.len() {
                let norm = settled;
                let better = match &st.best {
                    None => true,
                    Some((b, w)) => norm < *b || (norm == *b && lex_less(partial, w)),
                };
                if better {
                    st.best = Some((norm, partial.clone()));
                }
                return;
            }
            let (lo, hi) = st.boxes[depth].clone();
            let vec = st.solver.kernel[depth].clone();
            let mut c = lo.clone();
            // move to the low end of the box
            if !c.is_zero() {
                for (i, k) in vec.iter().enumerate() {
                    if !k.is_zero() {
                        partial[i] += &c * k;
                    }
                }
            }
            while c <= hi {
                descend(st, depth + 1, partial, settled.clone());
                c += 1;
                if c <= hi {
                    for (i, k) in vec.iter().enumerate() {
                        if !k.is_zero() {
                            partial[i] += k;
                        }
                    }
                }
            }
            // undo: partial currently holds origin + hi * vec (when the
            // loop ran) or origin + lo * vec (when it did not)
            let reached = if lo <= hi { hi } else { lo };
            if !reached.is_zero() {
                for (i, k) in vec.iter().enumerate() {
                    if !k.is_zero() {
                        partial[i] -= &reached * k;
                    }
                }
            }
        }

        let mut st = State {
            solver: self,
            boxes,
            budget_cap: cap0.clone(),
            best: None,
        };
        let mut partial = origin.to_vec();
        descend(&mut st, 0, &mut partial, BigInt::zero());
        st.best
    }
}

fn l1(v: &[BigInt]) -> BigInt {
    v.iter().map(Signed::abs).sum()
}

fn lex_less(a: &[BigInt], b: &[BigInt]) -> bool {
    a < b
}

fn round_to_int(x: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    (x + half).floor().to_integer()
}

/// Dual functionals `lambda_j` with `lambda_j . k_i = delta_ij`, plus
/// their sup norms; used for rigorous coordinate boxes.
fn dual_functionals(
    kernel: &[Vec<BigInt>],
    dim: usize,
) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let r = kernel.len();
    if r == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut gram = vec![vec![BigRational::zero(); r]; r];
    for i in 0..r {
        for j in 0..r {
            let mut acc = BigInt::zero();
            for t in 0..dim {
                acc += &kernel[i][t] * &kernel[j][t];
            }
            gram[i][j] = rational(&acc);
        }
    }
    let identity: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == j {
                        BigRational::from_integer(BigInt::from(1))
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let inv = solve_rational(&gram, &identity).expect("kernel basis is independent");
    let mut lambda = vec![vec![BigRational::zero(); dim]; r];
    let mut lambda_inf = Vec::with_capacity(r);
    for j in 0..r {
        for t in 0..dim {
            let mut acc = BigRational::zero();
            for i in 0..r {
                if !kernel[i][t].is_zero() {
                    acc += &inv[j][i] * rational(&kernel[i][t]);
                }
            }
            lambda[j][t] = acc;
        }
        let inf = lambda[j]
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigRational::zero);
        lambda_inf.push(inf);
    }
    (lambda, lambda_inf)
}

/// Integer feasibility of `map(mu) = z`; on success also returns one
/// particular solution and a basis of the kernel of the map.
pub fn integer_feasible(map: &ModuleMap, z: &Chain) -> Result<Feasibility> {
    FillingSolver::new(map).feasibility(z)
}

/// Exact minimum l1 norm of an integer preimage of `z` under `map`.
pub fn filling_norm(map: &ModuleMap, z: &Chain, budget: Option<u64>) -> Result<FillingResult> {
    FillingSolver::new(map).solve(z, budget)
}

/// Independent verification oracle: exhaustive search over all source
/// chains in increasing l1 norm `0, 1, ..., cap`, returning the first
/// hit. Cannot certify infeasibility; returns `BudgetExceeded(cap)` when
/// nothing maps onto `z` within the cap. The search shares nothing with
/// the Smith-normal-form solver.
pub fn filling_norm_oracle(map: &ModuleMap, z: &Chain, cap: u64) -> Result<FillingResult> {
    if !same_basis(z.basis(), map.target()) {
        return Err(Error::BasisMismatch {
            expected: map.target().name().to_string(),
            found: z.basis().name().to_string(),
        });
    }
    let tdim = map.target().size();
    let sdim = map.source().size();
    let mut cols: Vec<Vec<(usize, i64)>> = Vec::with_capacity(sdim);
    for col in map.columns() {
        let mut entries = Vec::new();
        for (t, v) in col.iter() {
            let v = v
                .to_i64()
                .ok_or_else(|| Error::CoefficientTooLarge(format!("map entry {v}")))?;
            entries.push((t.0, v));
        }
        cols.push(entries);
    }
    let mut residual = vec![0i64; tdim];
    for (t, v) in z.iter() {
        residual[t.0] = v
            .to_i64()
            .ok_or_else(|| Error::CoefficientTooLarge(format!("target entry {v}")))?;
    }

    // rows settle once no later column touches them
    let mut settle_at = vec![Vec::new(); sdim + 1];
    for row in 0..tdim {
        let last = (0..sdim).rev().find(|&j| cols[j].iter().any(|&(t, _)| t == row));
        match last {
            None => settle_at[0].push(row),
            Some(j) => settle_at[j + 1].push(row),
        }
    }
    // largest column norm among columns j.. for the remaining-budget bound
    let mut suffix_max = vec![0i64; sdim + 1];
    for j in (0..sdim).rev() {
        let norm: i64 = cols[j].iter().map(|&(_, v)| v.abs()).sum();
        suffix_max[j] = suffix_max[j + 1].max(norm);
    }

    struct Search<'a> {
        cols: &'a [Vec<(usize, i64)>],
        settle_at: &'a [Vec<usize>],
        suffix_max: &'a [i64],
        coeffs: Vec<i64>,
        res_norm: i64,
    }

    fn dfs(s: &mut Search, residual: &mut [i64], depth: usize, remaining: i64) -> bool {
        for &row in &s.settle_at[depth] {
            if residual[row] != 0 {
                return false;
            }
        }
        if depth == s.cols.len() {
            return remaining == 0 && s.res_norm == 0;
        }
        if s.res_norm > 0 {
            let m = s.suffix_max[depth];
            if m == 0 {
                return false;
            }
            if (s.res_norm + m - 1) / m > remaining {
                return false;
            }
        } else if remaining == 0 {
            // residual already zero: only the all-zero tail can finish
            for j in depth..s.cols.len() {
                s.coeffs[j] = 0;
            }
            return dfs_zero_tail(s, residual, depth);
        }
        // try coefficients 0, 1, -1, 2, -2, ... up to the remaining budget
        let mut order = vec![0i64];
        for v in 1..=remaining {
            order.push(v);
            order.push(-v);
        }
        for c in order {
            apply(s, residual, depth, c);
            s.coeffs[depth] = c;
            if dfs(s, residual, depth + 1, remaining - c.abs()) {
                return true;
            }
            apply(s, residual, depth, -c);
        }
        false
    }

    fn dfs_zero_tail(s: &Search, residual: &[i64], depth: usize) -> bool {
        for at in &s.settle_at[depth..] {
            for &row in at {
                if residual[row] != 0 {
                    return false;
                }
            }
        }
        residual.iter().all(|&x| x == 0)
    }

    fn apply(s: &mut Search, residual: &mut [i64], depth: usize, c: i64) {
        if c == 0 {
            return;
        }
        for &(row, v) in &s.cols[depth] {
            let before = residual[row].abs();
            residual[row] -= c * v;
            s.res_norm += residual[row].abs() - before;
        }
    }

    let res_norm: i64 = residual.iter().map(|x| x.abs()).sum();
    let mut search = Search {
        cols: &cols,
        settle_at: &settle_at,
        suffix_max: &suffix_max,
        coeffs: vec![0; sdim],
        res_norm,
    };
    for k in 0..=cap {
        let mut res = residual.clone();
        search.res_norm = res_norm;
        if dfs(&mut search, &mut res, 0, k as i64) {
            let witness = Chain::from_entries(
                map.source(),
                search
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (BasisId(i), BigInt::from(c))),
            )?;
            return Ok(FillingResult::Finite { norm: k, witness });
        }
    }
    Ok(FillingResult::BudgetExceeded(cap))
}
