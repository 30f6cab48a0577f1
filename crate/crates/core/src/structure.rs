//! Coherent structures described by their minimal path sets.
//!
//! Component indices are 1-based at the public boundary (constructors,
//! [`ComponentSet::to_one_based`], serialized specs) and 0-based bit
//! positions internally.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Largest number of path sets accepted by the inclusion-exclusion expansion.
pub const MAX_PATH_SETS: usize = 25;
/// Largest supported component count (one bit per component).
pub const MAX_COMPONENTS: usize = 64;

const MAX_BUILTIN_PATH_SETS: u128 = 1 << 20;

/// A set of components stored as a bitmask over 0-based positions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ComponentSet(u64);

impl ComponentSet {
    pub const EMPTY: ComponentSet = ComponentSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ComponentSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The set {1..n}.
    pub fn all(n: usize) -> Self {
        if n >= 64 {
            ComponentSet(u64::MAX)
        } else {
            ComponentSet((1u64 << n) - 1)
        }
    }

    /// Builds a set from 1-based indices, checking each lies in 1..=n.
    pub fn from_one_based(indices: &[usize], n: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut bits = 0u64;
        for &i in indices {
            if i == 0 || i > n || i > MAX_COMPONENTS {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            bits |= 1 << (i - 1);
        }
        Ok(ComponentSet(bits))
    }

    pub fn singleton(index0: usize) -> Self {
        ComponentSet(1 << index0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, index0: usize) -> bool {
        index0 < 64 && self.0 & (1 << index0) != 0
    }

    pub fn union(self, other: ComponentSet) -> ComponentSet {
        ComponentSet(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: ComponentSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// 0-based member positions in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Debug for ComponentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.to_one_based()).finish()
    }
}

impl fmt::Display for ComponentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// One merged inclusion-exclusion term: `coefficient * W(sum of R_k over indices)`.
///
/// Before merging every term has coefficient `(-1)^(|S|+1)`; unions that
/// coincide for different `S` are summed, so k-out-of-n systems produce
/// coefficients such as `-2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedUnionTerm {
    pub indices: ComponentSet,
    pub coefficient: i64,
}

/// Expands `P(union of {min over P_i > t})` into merged signed union terms.
///
/// Works on any nonempty family of nonempty sets, coherent or not. Terms are
/// returned ordered by cardinality, then by bit pattern.
pub fn union_terms(path_sets: &[ComponentSet]) -> Result<Vec<SignedUnionTerm>> {
    if path_sets.is_empty() || path_sets.iter().any(|p| p.is_empty()) {
        return Err(Error::EmptyPathSets);
    }
    if path_sets.len() > MAX_PATH_SETS {
        return Err(Error::TooManyPathSets(path_sets.len()));
    }
    let mut acc: HashMap<ComponentSet, i64> = HashMap::new();
    // Depth-first over include/exclude decisions; `depth` counts included sets.
    fn walk(
        sets: &[ComponentSet],
        next: usize,
        current: ComponentSet,
        depth: usize,
        acc: &mut HashMap<ComponentSet, i64>,
    ) {
        for i in next..sets.len() {
            let u = current.union(sets[i]);
            let sign = if depth.is_multiple_of(2) { 1 } else { -1 };
            *acc.entry(u).or_insert(0) += sign;
            walk(sets, i + 1, u, depth + 1, acc);
        }
    }
    walk(path_sets, 0, ComponentSet::EMPTY, 0, &mut acc);

    let mut terms: Vec<SignedUnionTerm> = acc
        .into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(indices, coefficient)| SignedUnionTerm {
            indices,
            coefficient,
        })
        .collect();
    terms.sort_by_key(|t| (t.indices.len(), t.indices.bits()));
    Ok(terms)
}

/// Collapses merged terms by cardinality of their index sets.
pub fn collapse_by_cardinality(terms: &[SignedUnionTerm]) -> BTreeMap<usize, i64> {
    let mut out = BTreeMap::new();
    for t in terms {
        *out.entry(t.indices.len()).or_insert(0) += t.coefficient;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Convenience constructors for common structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinStructure {
    Series,
    Parallel,
    /// Works while at least `k` of the `n` components work.
    KOutOfN(usize),
    /// Four engines, two per wing; at least one per wing must work.
    Aircraft4,
}

impl BuiltinStructure {
    pub fn parse(name: &str, k: Option<usize>) -> Result<Self> {
        match name {
            "series" => Ok(BuiltinStructure::Series),
            "parallel" => Ok(BuiltinStructure::Parallel),
            "k_of_n" | "k_out_of_n" => match k {
                Some(k) => Ok(BuiltinStructure::KOutOfN(k)),
                None => Err(Error::Spec("k_of_n structure requires `k`".into())),
            },
            "aircraft4" => Ok(BuiltinStructure::Aircraft4),
            other => Err(Error::UnknownStructure(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BuiltinStructure::Series => "series",
            BuiltinStructure::Parallel => "parallel",
            BuiltinStructure::KOutOfN(_) => "k_of_n",
            BuiltinStructure::Aircraft4 => "aircraft4",
        }
    }
}

/// A coherent structure: `n` components and their minimal path sets.
#[derive(Clone, PartialEq, Eq)]
pub struct Structure {
    n: usize,
    path_sets: Vec<ComponentSet>,
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Structure")
            .field("n", &self.n)
            .field("minimal_path_sets", &self.path_sets)
            .finish()
    }
}

impl Structure {
    /// Builds a structure from 1-based path sets.
    ///
    /// Duplicates and supersets of other given sets are dropped; every
    /// component must remain in some path set.
    pub fn new(n: usize, path_sets: &[Vec<usize>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyPathSets);
        }
        if n > MAX_COMPONENTS {
            return Err(Error::TooManyComponents(n));
        }
        if path_sets.is_empty() {
            return Err(Error::EmptyPathSets);
        }
        let sets = path_sets
            .iter()
            .map(|p| {
                ComponentSet::from_one_based(p, n).map_err(|e| match e {
                    Error::EmptySet => Error::EmptyPathSets,
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_sets(n, sets)
    }

    fn from_sets(n: usize, mut sets: Vec<ComponentSet>) -> Result<Self> {
        sets.sort_by_key(|s| (s.len(), s.bits()));
        sets.dedup();
        let mut minimal: Vec<ComponentSet> = Vec::with_capacity(sets.len());
        for s in sets {
            // Sorted by size, so any subset of `s` is already in `minimal`.
            if !minimal.iter().any(|m| m.is_subset_of(s)) {
                minimal.push(s);
            }
        }
        let covered = minimal
            .iter()
            .fold(ComponentSet::EMPTY, |acc, s| acc.union(*s));
        if let Some(i) = (0..n).find(|&i| !covered.contains(i)) {
            return Err(Error::IrrelevantComponent(i + 1));
        }
        Ok(Structure {
            n,
            path_sets: minimal,
        })
    }

    pub fn builtin(kind: BuiltinStructure, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidK { k: 0, n });
        }
        if n > MAX_COMPONENTS {
            return Err(Error::TooManyComponents(n));
        }
        match kind {
            BuiltinStructure::Series => Self::k_out_of_n(n, n),
            BuiltinStructure::Parallel => Self::k_out_of_n(1, n),
            BuiltinStructure::KOutOfN(k) => Self::k_out_of_n(k, n),
            BuiltinStructure::Aircraft4 => {
                if n != 4 {
                    return Err(Error::Spec(format!(
                        "aircraft4 structure has exactly 4 components, got n={n}"
                    )));
                }
                Self::new(4, &[vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4]])
            }
        }
    }

    /// Parses `kind` by name (`series`, `parallel`, `k_of_n`, `aircraft4`).
    pub fn builtin_named(kind: &str, n: usize, k: Option<usize>) -> Result<Self> {
        Self::builtin(BuiltinStructure::parse(kind, k)?, n)
    }

    fn k_out_of_n(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidK { k, n });
        }
        if binomial(n, k) > MAX_BUILTIN_PATH_SETS {
            return Err(Error::TooManyPathSets(usize::MAX));
        }
        let mut sets = Vec::new();
        // Gosper's hack over k-bit patterns of width n.
        let mut v: u128 = (1u128 << k) - 1;
        let limit: u128 = 1u128 << n;
        while v < limit {
            sets.push(ComponentSet(v as u64));
            let c = v & v.wrapping_neg();
            let r = v + c;
            v = (((r ^ v) >> 2) / c) | r;
        }
        Self::from_sets(n, sets)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn path_sets(&self) -> &[ComponentSet] {
        &self.path_sets
    }

    pub fn path_sets_one_based(&self) -> Vec<Vec<usize>> {
        self.path_sets.iter().map(|p| p.to_one_based()).collect()
    }

    /// Number of minimal path sets.
    pub fn r(&self) -> usize {
        self.path_sets.len()
    }

    pub fn is_series(&self) -> bool {
        self.path_sets.len() == 1
    }

    pub fn is_parallel(&self) -> bool {
        self.path_sets.len() == self.n && self.path_sets.iter().all(|p| p.len() == 1)
    }

    pub fn signed_union_terms(&self) -> Result<Vec<SignedUnionTerm>> {
        union_terms(&self.path_sets)
    }

    /// `c_k`: summed coefficients of union terms with `k` members.
    pub fn cardinality_coefficients(&self) -> Result<BTreeMap<usize, i64>> {
        Ok(collapse_by_cardinality(&self.signed_union_terms()?))
    }

    /// Boolean structure function for the set of working components.
    pub fn works(&self, working: ComponentSet) -> bool {
        self.path_sets.iter().any(|p| p.is_subset_of(working))
    }

    /// System lifetime `max over path sets of min over members`.
    pub fn lifetime(&self, component_lifetimes: &[f64]) -> f64 {
        path_family_lifetime(&self.path_sets, component_lifetimes)
    }
}

/// `max_i min_{j in P_i} x_j` for an arbitrary family of sets.
pub fn path_family_lifetime(path_sets: &[ComponentSet], x: &[f64]) -> f64 {
    path_sets
        .iter()
        .map(|p| p.iter().map(|j| x[j]).fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
