//! Sparse integer chains over named cell bases, module maps given
//! column-wise, and graded chain complexes.
//!
//! A [`Chain`] is a finitely supported integer vector over a [`Basis`];
//! coefficients are arbitrary-precision and zero coefficients are never
//! stored. All values are immutable after construction and cheap to share.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Index of a cell inside one basis. Labels live on the [`Basis`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisId(pub usize);

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite ordered family of distinct cell labels.
#[derive(Debug)]
pub struct Basis {
    name: String,
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Basis {
    pub fn new(name: impl Into<String>, labels: Vec<String>) -> Result<Arc<Self>> {
        let name = name.into();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate label `{label}` in basis `{name}`"
                )));
            }
        }
        Ok(Arc::new(Basis {
            name,
            labels,
            index,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, id: BasisId) -> &str {
        &self.labels[id.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id_of(&self, label: &str) -> Option<BasisId> {
        self.index.get(label).copied().map(BasisId)
    }

    pub fn ids(&self) -> impl Iterator<Item = BasisId> {
        (0..self.size()).map(BasisId)
    }

    fn check_id(&self, id: BasisId) -> Result<()> {
        if id.0 < self.size() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: id.0,
                basis: self.name.clone(),
                size: self.size(),
            })
        }
    }
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.labels == other.labels
    }
}

impl Eq for Basis {}

pub(crate) fn same_basis(a: &Arc<Basis>, b: &Arc<Basis>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn basis_mismatch(expected: &Basis, found: &Basis) -> Error {
    Error::BasisMismatch {
        expected: expected.name().to_string(),
        found: found.name().to_string(),
    }
}

/// Finitely supported integer vector over a basis. Stored entries are
/// always nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    basis: Arc<Basis>,
    entries: BTreeMap<BasisId, BigInt>,
}

impl Chain {
    pub fn zero(basis: &Arc<Basis>) -> Self {
        Chain {
            basis: Arc::clone(basis),
            entries: BTreeMap::new(),
        }
    }

    /// Single basis element with the given sign (+1 or -1).
    pub fn unit(basis: &Arc<Basis>, id: BasisId, sign: i8) -> Result<Self> {
        basis.check_id(id)?;
        let mut entries = BTreeMap::new();
        if sign != 0 {
            entries.insert(id, BigInt::from(sign.signum()));
        }
        Ok(Chain {
            basis: Arc::clone(basis),
            entries,
        })
    }

    pub fn from_entries<I>(basis: &Arc<Basis>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisId, BigInt)>,
    {
        let mut map: BTreeMap<BasisId, BigInt> = BTreeMap::new();
        for (id, coeff) in entries {
            basis.check_id(id)?;
            let slot = map.entry(id).or_insert_with(BigInt::zero);
            *slot += coeff;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Chain {
            basis: Arc::clone(basis),
            entries: map,
        })
    }

    /// Convenience constructor from `(label, coefficient)` pairs.
    pub fn from_labels<'a, I, C>(basis: &Arc<Basis>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, C)>,
        C: Into<BigInt>,
    {
        let mut entries = Vec::new();
        for (label, coeff) in terms {
            let id = basis.id_of(label).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown label `{}` in basis `{}`",
                    label,
                    basis.name()
                ))
            })?;
            entries.push((id, coeff.into()));
        }
        Chain::from_entries(basis, entries)
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of basis elements in the support.
    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (BasisId, &BigInt)> {
        self.entries.iter().map(|(id, c)| (*id, c))
    }

    pub fn support(&self) -> impl Iterator<Item = BasisId> + '_ {
        self.entries.keys().copied()
    }

    /// The coefficient `<x, s>`; zero when `s` is not in the support.
    pub fn coeff(&self, s: BasisId) -> Result<BigInt> {
        self.basis.check_id(s)?;
        Ok(self.entries.get(&s).cloned().unwrap_or_else(BigInt::zero))
    }

    /// `|| x ||_S`, the sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> u64 {
        let mut total = BigInt::zero();
        for c in self.entries.values() {
            total += c.abs();
        }
        u64::try_from(&total).expect("l1 norm exceeds u64")
    }

    pub fn add(&self, other: &Chain) -> Result<Chain> {
        if !same_basis(&self.basis, &other.basis) {
            return Err(basis_mismatch(&self.basis, &other.basis));
        }
        let mut entries = self.entries.clone();
        for (id, c) in &other.entries {
            let slot = entries.entry(*id).or_insert_with(BigInt::zero);
            *slot += c;
            if slot.is_zero() {
                entries.remove(id);
            }
        }
        Ok(Chain {
            basis: Arc::clone(&self.basis),
            entries,
        })
    }

    pub fn sub(&self, other: &Chain) -> Result<Chain> {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> Chain {
        Chain {
            basis: Arc::clone(&self.basis),
            entries: self.entries.iter().map(|(id, c)| (*id, -c)).collect(),
        }
    }

    pub fn scale(&self, n: &BigInt) -> Chain {
        if n.is_zero() {
            return Chain::zero(&self.basis);
        }
        Chain {
            basis: Arc::clone(&self.basis),
            entries: self.entries.iter().map(|(id, c)| (*id, n * c)).collect(),
        }
    }

    /// Whether `self` is a part of `y`: `<x,s><y,s> >= <x,s>^2` for all `s`.
    /// The zero chain is a part of everything.
    pub fn is_part_of(&self, y: &Chain) -> Result<bool> {
        if !same_basis(&self.basis, &y.basis) {
            return Err(basis_mismatch(&self.basis, &y.basis));
        }
        for (id, xs) in &self.entries {
            let ys = y.entries.get(id).cloned().unwrap_or_else(BigInt::zero);
            if xs * &ys < xs * xs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Basis elements where the two chains carry opposite-sign coefficients.
    pub fn s_intersection(&self, y: &Chain) -> Result<Vec<BasisId>> {
        if !same_basis(&self.basis, &y.basis) {
            return Err(basis_mismatch(&self.basis, &y.basis));
        }
        let mut out = Vec::new();
        for (id, xs) in &self.entries {
            if let Some(ys) = y.entries.get(id) {
                if (xs.is_positive() && ys.is_negative())
                    || (xs.is_negative() && ys.is_positive())
                {
                    out.push(*id);
                }
            }
        }
        Ok(out)
    }

    /// Sum of coefficients; for degree-0 chains this is the augmentation.
    pub fn coefficient_sum(&self) -> BigInt {
        let mut total = BigInt::zero();
        for c in self.entries.values() {
            total += c;
        }
        total
    }

    /// Dense lexicographic comparison over basis indices 0, 1, 2, ...
    /// with absent coefficients read as zero.
    pub fn lex_cmp(&self, other: &Chain) -> Ordering {
        let zero = BigInt::zero();
        let mut a = self.entries.iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some((ia, ca)), Some((ib, cb))) => match ia.cmp(ib) {
                    Ordering::Equal => {
                        match ca.cmp(cb) {
                            Ordering::Equal => {
                                a.next();
                                b.next();
                            }
                            ord => return ord,
                        }
                    }
                    Ordering::Less => {
                        // a has an entry at ia where b is zero
                        match ca.cmp(&&zero) {
                            Ordering::Equal => unreachable!(),
                            ord => return ord,
                        }
                    }
                    Ordering::Greater => match zero.cmp(cb) {
                        Ordering::Equal => unreachable!(),
                        ord => return ord,
                    },
                },
                (Some((_, ca)), None) => return ca.cmp(&&zero),
                (None, Some((_, cb))) => return zero.cmp(cb),
            }
        }
    }

    /// Entrywise dot product; both chains must share a basis.
    pub(crate) fn dot(&self, other: &Chain) -> BigInt {
        let mut acc = BigInt::zero();
        for (id, c) in &self.entries {
            if let Some(d) = other.entries.get(id) {
                acc += c * d;
            }
        }
        acc
    }

    pub(crate) fn from_dense(basis: &Arc<Basis>, dense: &[BigInt]) -> Chain {
        debug_assert_eq!(dense.len(), basis.size());
        let entries = dense
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (BasisId(i), c.clone()))
            .collect();
        Chain {
            basis: Arc::clone(basis),
            entries,
        }
    }

    pub(crate) fn to_dense(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.basis.size()];
        for (id, c) in &self.entries {
            out[id.0] = c.clone();
        }
        out
    }

    /// Canonical term string, e.g. `2*a - 1*b`, or `0` for the zero chain.
    pub fn term_string(&self) -> String {
        if self.entries.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (id, c)) in self.entries.iter().enumerate() {
            let label = self.basis.label(*id);
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
                out.push_str(&format!("{mag}*{label}"));
            } else if c.is_negative() {
                out.push_str(&format!(" - {mag}*{label}"));
            } else {
                out.push_str(&format!(" + {mag}*{label}"));
            }
        }
        out
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.term_string())
    }
}

/// Sum of coefficients of a degree-0 chain.
pub fn augmentation(x: &Chain) -> BigInt {
    x.coefficient_sum()
}

/// Integer-linear map between two bases, one image chain per source
/// basis element.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    source: Arc<Basis>,
    target: Arc<Basis>,
    columns: Vec<Chain>,
}

impl ModuleMap {
    pub fn new(source: &Arc<Basis>, target: &Arc<Basis>, columns: Vec<Chain>) -> Result<Self> {
        if columns.len() != source.size() {
            return Err(Error::InvalidInput(format!(
                "map from `{}` needs {} columns, got {}",
                source.name(),
                source.size(),
                columns.len()
            )));
        }
        for col in &columns {
            if !same_basis(col.basis(), target) {
                return Err(basis_mismatch(target, col.basis()));
            }
        }
        Ok(ModuleMap {
            source: Arc::clone(source),
            target: Arc::clone(target),
            columns,
        })
    }

    pub fn zero(source: &Arc<Basis>, target: &Arc<Basis>) -> Self {
        let columns = (0..source.size()).map(|_| Chain::zero(target)).collect();
        ModuleMap {
            source: Arc::clone(source),
            target: Arc::clone(target),
            columns,
        }
    }

    pub fn source(&self) -> &Arc<Basis> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Basis> {
        &self.target
    }

    pub fn column(&self, s: BasisId) -> Result<&Chain> {
        self.source.check_id(s)?;
        Ok(&self.columns[s.0])
    }

    pub fn columns(&self) -> &[Chain] {
        &self.columns
    }

    pub fn is_zero_map(&self) -> bool {
        self.columns.iter().all(Chain::is_zero)
    }

    /// Linear extension: `x = sum n_s s` maps to `sum n_s rho(s)`.
    pub fn apply(&self, x: &Chain) -> Result<Chain> {
        if !same_basis(x.basis(), &self.source) {
            return Err(basis_mismatch(&self.source, x.basis()));
        }
        let mut acc: BTreeMap<BasisId, BigInt> = BTreeMap::new();
        for (s, c) in x.iter() {
            for (t, v) in self.columns[s.0].iter() {
                let slot = acc.entry(t).or_insert_with(BigInt::zero);
                *slot += c * v;
                if slot.is_zero() {
                    acc.remove(&t);
                }
            }
        }
        Ok(Chain {
            basis: Arc::clone(&self.target),
            entries: acc,
        })
    }

    /// All source basis elements whose column hits `t`.
    pub fn target_support(&self, t: BasisId) -> Result<Vec<BasisId>> {
        self.target.check_id(t)?;
        let mut out = Vec::new();
        for (i, col) in self.columns.iter().enumerate() {
            if col.entries.contains_key(&t) {
                out.push(BasisId(i));
            }
        }
        Ok(out)
    }
}

/// Graded bases with boundary maps; `boundary(d)` maps degree `d` to
/// degree `d - 1`.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    name: String,
    dimensions: Vec<Arc<Basis>>,
    boundaries: Vec<ModuleMap>,
}

impl ChainComplex {
    /// `boundaries[i]` must map `dimensions[i + 1]` into `dimensions[i]`.
    /// Shape is validated here; the boundary-of-boundary condition is
    /// checked separately by [`ChainComplex::validate`].
    pub fn new(
        name: impl Into<String>,
        dimensions: Vec<Arc<Basis>>,
        boundaries: Vec<ModuleMap>,
    ) -> Result<Self> {
        let name = name.into();
        if dimensions.is_empty() {
            return Err(Error::InvalidInput(format!(
                "complex `{name}` needs at least degree 0"
            )));
        }
        if boundaries.len() + 1 != dimensions.len() {
            return Err(Error::InvalidInput(format!(
                "complex `{name}`: {} degrees need {} boundary maps, got {}",
                dimensions.len(),
                dimensions.len() - 1,
                boundaries.len()
            )));
        }
        for (d, map) in boundaries.iter().enumerate() {
            if !same_basis(map.source(), &dimensions[d + 1])
                || !same_basis(map.target(), &dimensions[d])
            {
                return Err(Error::InvalidInput(format!(
                    "complex `{name}`: boundary {} does not match bases",
                    d + 1
                )));
            }
        }
        Ok(ChainComplex {
            name,
            dimensions,
            boundaries,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn top_degree(&self) -> usize {
        self.dimensions.len() - 1
    }

    pub fn basis(&self, d: usize) -> Option<&Arc<Basis>> {
        self.dimensions.get(d)
    }

    pub fn size(&self, d: usize) -> usize {
        self.dimensions.get(d).map_or(0, |b| b.size())
    }

    /// The boundary map of degree `d >= 1`.
    pub fn boundary(&self, d: usize) -> Option<&ModuleMap> {
        if d == 0 {
            None
        } else {
            self.boundaries.get(d - 1)
        }
    }

    /// Map whose kernel carries the degree-`d` cycles: the boundary for
    /// `d >= 1`, the augmentation onto a one-point basis for `d = 0`.
    pub fn cycle_map(&self, d: usize) -> Result<ModuleMap> {
        if d == 0 {
            Ok(self.augmentation_map())
        } else {
            self.boundary(d).cloned().ok_or(Error::DegreeOutOfRange {
                degree: d,
                top: self.top_degree(),
            })
        }
    }

    /// Map used to fill degree-`d` cycles by degree-`d + 1` chains. When
    /// the complex has no cells above `d` this is the zero map from an
    /// empty basis, so every nonzero cycle is unfillable.
    pub fn filling_map(&self, d: usize) -> Result<ModuleMap> {
        let target = self.basis(d).ok_or(Error::DegreeOutOfRange {
            degree: d,
            top: self.top_degree(),
        })?;
        match self.boundary(d + 1) {
            Some(m) => Ok(m.clone()),
            None => {
                let empty = Basis::new(format!("{}#{}", self.name, d + 1), Vec::new())
                    .expect("empty basis");
                Ok(ModuleMap::zero(&empty, target))
            }
        }
    }

    /// Augmentation of degree-0 chains as a map onto a one-point basis.
    pub fn augmentation_map(&self) -> ModuleMap {
        let point = Basis::new("point", vec!["pt".to_string()]).expect("point basis");
        let columns = (0..self.dimensions[0].size())
            .map(|_| Chain::unit(&point, BasisId(0), 1).expect("unit"))
            .collect();
        ModuleMap::new(&self.dimensions[0], &point, columns).expect("augmentation map")
    }

    /// Checks that consecutive boundaries compose to zero on every basis
    /// element, reporting the first violating cell.
    pub fn validate(&self) -> Result<()> {
        for d in 1..self.boundaries.len() + 1 {
            let upper = &self.boundaries[d - 1];
            if d >= 2 {
                let lower = &self.boundaries[d - 2];
                for s in upper.source().ids() {
                    let image = upper.column(s)?;
                    if !lower.apply(image)?.is_zero() {
                        return Err(Error::BoundaryViolation {
                            degree: d,
                            cell: upper.source().label(s).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}
