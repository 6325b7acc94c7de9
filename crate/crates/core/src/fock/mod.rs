//! Truncated monotone Fock space.
//!
//! Basis vectors are strictly increasing index tuples, the empty tuple being
//! the vacuum. A [`TruncationSpec`] keeps every tuple over `{1..N}` of length
//! at most `L`; operators are exact integer matrices over that basis.
//!
//! Creations whose image would leave the truncation are dropped. Identities
//! are therefore only exact on *safe* vectors, see [`TruncationSpec::is_safe`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{check_cap, Error, Result};

pub mod identities;

/// Default cap on `|I|` for [`invariant_subspace_matrix`].
pub const DEFAULT_SUBSPACE_CAP: usize = 20;

/// A strictly increasing tuple of positive indices. The empty tuple is Ω.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BasisVector(Vec<u32>);

impl BasisVector {
    pub fn vacuum() -> Self {
        BasisVector(Vec::new())
    }

    pub fn new(indices: Vec<u32>) -> Result<Self> {
        if indices.iter().any(|&i| i == 0) {
            return Err(Error::InvalidArgument("basis indices start at 1".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "basis indices must be strictly increasing: {indices:?}"
            )));
        }
        Ok(BasisVector(indices))
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    /// Particle number.
    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// Applies an index map to every entry. The map must be order preserving.
    pub fn map_indices(&self, f: impl Fn(u32) -> u32) -> BasisVector {
        BasisVector(self.0.iter().map(|&i| f(i)).collect())
    }
}

/// Graded-lexicographic: shorter tuples first, then lexicographic.
impl Ord for BasisVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for BasisVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "Ω");
        }
        write!(f, "(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TruncationSpec {
    pub max_index: u32,
    pub max_level: u32,
}

impl TruncationSpec {
    pub fn new(max_index: u32, max_level: u32) -> Result<Self> {
        if max_index == 0 || max_level == 0 {
            return Err(Error::EmptyTruncation);
        }
        Ok(TruncationSpec { max_index, max_level })
    }

    /// `Σ_{k=0}^{L} C(N, k)`.
    pub fn dimension(&self) -> usize {
        let n = self.max_index as usize;
        let mut total = 0usize;
        let mut binom = 1usize;
        for k in 0..=(self.max_level as usize).min(n) {
            total += binom;
            binom = binom * (n - k) / (k + 1);
        }
        total
    }

    /// Nothing can be dropped when every tuple over `{1..N}` fits.
    pub fn is_closed(&self) -> bool {
        self.max_level >= self.max_index
    }

    /// True when a word of `depth` creation/annihilation steps applied to `v`
    /// never needs a level beyond `L`. One step of containment per factor.
    pub fn is_safe(&self, v: &BasisVector, depth: usize) -> bool {
        self.is_closed() || v.level() + depth <= self.max_level as usize
    }
}

/// A nonempty strictly increasing set of positive indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IndexSet(Vec<u32>);

impl IndexSet {
    pub fn new(mut indices: Vec<u32>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::IndexSet("index set must be nonempty".into()));
        }
        if indices.contains(&0) {
            return Err(Error::IndexSet("indices start at 1".into()));
        }
        let len = indices.len();
        indices.sort_unstable();
        indices.dedup();
        if indices.len() != len {
            return Err(Error::IndexSet("duplicate indices".into()));
        }
        Ok(IndexSet(indices))
    }

    /// `{1, ..., n}`.
    pub fn contiguous(n: u32) -> Result<Self> {
        IndexSet::new((1..=n).collect())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max(&self) -> u32 {
        *self.0.last().expect("nonempty")
    }

    /// Some `i_j ≠ i_{j-1} + 1` with `i_0 = 0`, i.e. not `{1..n}`.
    pub fn is_gapped(&self) -> bool {
        self.max() as usize != self.0.len()
    }

    /// `{1..max} \ I`.
    pub fn complement(&self) -> Vec<u32> {
        (1..=self.max()).filter(|i| self.0.binary_search(i).is_err()).collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All tuples over `{1..N}` of length `≤ L`, graded-lex, vacuum first.
pub fn enumerate_basis(trunc: TruncationSpec) -> Vec<BasisVector> {
    let pool: Vec<u32> = (1..=trunc.max_index).collect();
    subsets_graded(&pool, trunc.max_level as usize)
}

fn subsets_graded(pool: &[u32], max_len: usize) -> Vec<BasisVector> {
    let mut out = vec![BasisVector::vacuum()];
    let mut current: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..max_len.min(pool.len()) {
        let mut next = Vec::new();
        for tuple in &current {
            let start = match tuple.last() {
                Some(&last) => pool.partition_point(|&p| p <= last),
                None => 0,
            };
            for &p in &pool[start..] {
                let mut t = tuple.clone();
                t.push(p);
                next.push(t);
            }
        }
        // `current` is lexicographic, and extending in order keeps it so
        out.extend(next.iter().cloned().map(BasisVector));
        current = next;
    }
    out
}

/// Monotone annihilator `a_i`: removes `i` if it is the first index.
pub fn annihilate(i: u32, v: &BasisVector) -> Option<BasisVector> {
    match v.first() {
        Some(first) if first == i => Some(BasisVector(v.0[1..].to_vec())),
        _ => None,
    }
}

/// Monotone creator `a†_i`: prepends `i` if it is below every index.
pub fn create(i: u32, v: &BasisVector) -> Option<BasisVector> {
    match v.first() {
        Some(first) if i >= first => None,
        _ => {
            let mut t = Vec::with_capacity(v.level() + 1);
            t.push(i);
            t.extend_from_slice(&v.0);
            Some(BasisVector(t))
        }
    }
}

/// Right annihilator `b_i`: removes `i` if it is the last index.
pub fn right_annihilate(i: u32, v: &BasisVector) -> Option<BasisVector> {
    match v.last() {
        Some(last) if last == i => Some(BasisVector(v.0[..v.0.len() - 1].to_vec())),
        _ => None,
    }
}

/// Right creator `b†_i`: appends `i` if it is above every index.
pub fn right_create(i: u32, v: &BasisVector) -> Option<BasisVector> {
    match v.last() {
        Some(last) if i <= last => None,
        _ => {
            let mut t = v.0.clone();
            t.push(i);
            Some(BasisVector(t))
        }
    }
}

/// An ordered basis with index lookup.
#[derive(Debug, PartialEq)]
pub struct Basis {
    vectors: Vec<BasisVector>,
    lookup: HashMap<BasisVector, usize>,
}

impl Basis {
    pub fn new(vectors: Vec<BasisVector>) -> Self {
        let lookup = vectors
            .iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), k))
            .collect();
        Basis { vectors, lookup }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[BasisVector] {
        &self.vectors
    }

    pub fn get(&self, k: usize) -> &BasisVector {
        &self.vectors[k]
    }

    pub fn position(&self, v: &BasisVector) -> Option<usize> {
        self.lookup.get(v).copied()
    }
}

/// Column-sparse exact integer matrix over a shared basis.
#[derive(Clone, Debug)]
pub struct SparseOperator {
    basis: Arc<Basis>,
    columns: Vec<Vec<(usize, i64)>>,
}

impl SparseOperator {
    pub fn zero(basis: Arc<Basis>) -> Self {
        let columns = vec![Vec::new(); basis.len()];
        SparseOperator { basis, columns }
    }

    pub fn identity(basis: Arc<Basis>) -> Self {
        let columns = (0..basis.len()).map(|j| vec![(j, 1)]).collect();
        SparseOperator { basis, columns }
    }

    /// Matrix of a map on basis vectors; images outside the basis are dropped.
    pub fn from_basis_map(
        basis: Arc<Basis>,
        f: impl Fn(&BasisVector) -> Option<BasisVector>,
    ) -> Self {
        let columns = basis
            .vectors()
            .iter()
            .map(|v| match f(v).and_then(|w| basis.position(&w)) {
                Some(row) => vec![(row, 1)],
                None => Vec::new(),
            })
            .collect();
        SparseOperator { basis, columns }
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.columns[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.columns[j]
            .iter()
            .filter(|(r, _)| *r == i)
            .map(|(_, c)| *c)
            .sum()
    }

    fn same_basis(&self, other: &SparseOperator) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis {
            Ok(())
        } else {
            Err(Error::InvalidArgument("operators act on different bases".into()))
        }
    }

    fn from_dense_columns(basis: Arc<Basis>, dense: Vec<BTreeMap<usize, i64>>) -> Self {
        let columns = dense
            .into_iter()
            .map(|col| col.into_iter().filter(|&(_, c)| c != 0).collect())
            .collect();
        SparseOperator { basis, columns }
    }

    pub fn add(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.linear_combination(1, other, 1)
    }

    pub fn sub(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.linear_combination(1, other, -1)
    }

    pub fn scale(&self, c: i64) -> SparseOperator {
        let columns = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .filter(|_| c != 0)
                    .map(|&(r, x)| (r, x * c))
                    .collect()
            })
            .collect();
        SparseOperator { basis: self.basis.clone(), columns }
    }

    fn linear_combination(&self, a: i64, other: &SparseOperator, b: i64) -> Result<SparseOperator> {
        self.same_basis(other)?;
        let dense = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(x, y)| {
                let mut col = BTreeMap::new();
                for &(r, c) in x {
                    *col.entry(r).or_insert(0) += a * c;
                }
                for &(r, c) in y {
                    *col.entry(r).or_insert(0) += b * c;
                }
                col
            })
            .collect();
        Ok(SparseOperator::from_dense_columns(self.basis.clone(), dense))
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.same_basis(other)?;
        let dense = other
            .columns
            .iter()
            .map(|col| {
                let mut out = BTreeMap::new();
                for &(k, b) in col {
                    for &(i, a) in &self.columns[k] {
                        *out.entry(i).or_insert(0) += a * b;
                    }
                }
                out
            })
            .collect();
        Ok(SparseOperator::from_dense_columns(self.basis.clone(), dense))
    }

    /// `self · x` for a sparse vector.
    pub fn apply_sparse(&self, x: &BTreeMap<usize, i64>) -> BTreeMap<usize, i64> {
        let mut out = BTreeMap::new();
        for (&k, &b) in x {
            for &(i, a) in &self.columns[k] {
                *out.entry(i).or_insert(0) += a * b;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    /// `self · x` with overflow detection.
    pub fn apply_i128(&self, x: &[i128]) -> Result<Vec<i128>> {
        let mut out = vec![0i128; self.dim()];
        for (k, &b) in x.iter().enumerate() {
            if b == 0 {
                continue;
            }
            for &(i, a) in &self.columns[k] {
                let term = (a as i128).checked_mul(b).ok_or(Error::Overflow("matvec"))?;
                out[i] = out[i].checked_add(term).ok_or(Error::Overflow("matvec"))?;
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> SparseOperator {
        let mut dense = vec![BTreeMap::new(); self.dim()];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, c) in col {
                *dense[i].entry(j).or_insert(0) += c;
            }
        }
        SparseOperator::from_dense_columns(self.basis.clone(), dense)
    }

    fn canonical_columns(&self) -> Vec<BTreeMap<usize, i64>> {
        self.columns
            .iter()
            .map(|col| {
                let mut m = BTreeMap::new();
                for &(r, c) in col {
                    *m.entry(r).or_insert(0) += c;
                }
                m.retain(|_, c| *c != 0);
                m
            })
            .collect()
    }

    /// Exact entrywise equality.
    pub fn equals(&self, other: &SparseOperator) -> bool {
        self.dim() == other.dim() && self.canonical_columns() == other.canonical_columns()
    }

    /// Exact integer transpose equality.
    pub fn is_symmetric(&self) -> bool {
        self.equals(&self.transpose())
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_dense_i64(&self) -> Vec<Vec<i64>> {
        let n = self.dim();
        let mut m = vec![vec![0i64; n]; n];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, c) in col {
                m[i][j] += c;
            }
        }
        m
    }

    pub fn to_dense_f64(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, c) in col {
                m[(i, j)] += c as f64;
            }
        }
        m
    }
}

/// Applies `ops[0] · ops[1] · … · ops[k-1]` to the basis vector at column `j`.
pub fn apply_word(ops: &[&SparseOperator], j: usize) -> BTreeMap<usize, i64> {
    let mut v = BTreeMap::from([(j, 1i64)]);
    for op in ops.iter().rev() {
        v = op.apply_sparse(&v);
    }
    v
}

/// A truncated Fock space together with its shared basis.
#[derive(Clone, Debug)]
pub struct FockSpace {
    trunc: TruncationSpec,
    basis: Arc<Basis>,
}

impl FockSpace {
    pub fn new(trunc: TruncationSpec) -> Self {
        let basis = Arc::new(Basis::new(enumerate_basis(trunc)));
        FockSpace { trunc, basis }
    }

    pub fn truncation(&self) -> TruncationSpec {
        self.trunc
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn check_index(&self, i: u32) -> Result<()> {
        if i == 0 || i > self.trunc.max_index {
            Err(Error::Truncation { index: i, max_index: self.trunc.max_index })
        } else {
            Ok(())
        }
    }

    pub fn annihilation(&self, i: u32) -> Result<SparseOperator> {
        self.check_index(i)?;
        Ok(SparseOperator::from_basis_map(self.basis.clone(), |v| annihilate(i, v)))
    }

    pub fn creation(&self, i: u32) -> Result<SparseOperator> {
        self.check_index(i)?;
        Ok(SparseOperator::from_basis_map(self.basis.clone(), |v| create(i, v)))
    }

    pub fn right_annihilation(&self, i: u32) -> Result<SparseOperator> {
        self.check_index(i)?;
        Ok(SparseOperator::from_basis_map(self.basis.clone(), |v| {
            right_annihilate(i, v)
        }))
    }

    pub fn right_creation(&self, i: u32) -> Result<SparseOperator> {
        self.check_index(i)?;
        Ok(SparseOperator::from_basis_map(self.basis.clone(), |v| right_create(i, v)))
    }

    /// `s_i = a_i + a†_i`.
    pub fn position(&self, i: u32) -> Result<SparseOperator> {
        self.annihilation(i)?.add(&self.creation(i)?)
    }

    /// `r_i = b_i + b†_i`.
    pub fn right_position(&self, i: u32) -> Result<SparseOperator> {
        self.right_annihilation(i)?.add(&self.right_creation(i)?)
    }

    /// `S_I = Σ_{i ∈ I} s_i`.
    pub fn sum(&self, set: &IndexSet) -> Result<SparseOperator> {
        let mut total = SparseOperator::zero(self.basis.clone());
        for &i in set.indices() {
            total = total.add(&self.position(i)?)?;
        }
        Ok(total)
    }
}

pub fn build_position(i: u32, trunc: TruncationSpec) -> Result<SparseOperator> {
    FockSpace::new(trunc).position(i)
}

pub fn build_right_position(i: u32, trunc: TruncationSpec) -> Result<SparseOperator> {
    FockSpace::new(trunc).right_position(i)
}

pub fn build_sum(set: &IndexSet, trunc: TruncationSpec) -> Result<SparseOperator> {
    FockSpace::new(trunc).sum(set)
}

/// Restriction of `S_I` to the span of tuples drawn from `I`.
///
/// That span contains Ω and is invariant under `S_I`. Its basis has `2^|I|`
/// elements in graded-lex order. The matrix is returned sparse; call
/// [`SparseOperator::to_dense_i64`] for a dense copy.
pub fn invariant_subspace_matrix(set: &IndexSet) -> Result<SparseOperator> {
    invariant_subspace_matrix_with_cap(set, DEFAULT_SUBSPACE_CAP)
}

pub fn invariant_subspace_matrix_with_cap(set: &IndexSet, cap: usize) -> Result<SparseOperator> {
    check_cap("|I|", set.len(), cap)?;
    let basis = Arc::new(Basis::new(subsets_graded(set.indices(), set.len())));
    let mut total = SparseOperator::zero(basis.clone());
    for &i in set.indices() {
        let a = SparseOperator::from_basis_map(basis.clone(), |v| annihilate(i, v));
        let c = SparseOperator::from_basis_map(basis.clone(), |v| create(i, v));
        total = total.add(&a)?.add(&c)?;
    }
    Ok(total)
}

/// Largest `|[A,B]_{ij}|` over columns `j` whose basis vector is safe for
/// two steps. `None` when no column is safe.
pub fn commutator_on_safe_vectors(
    a: &SparseOperator,
    b: &SparseOperator,
    trunc: TruncationSpec,
) -> Result<Option<i64>> {
    a.same_basis(b)?;
    let mut worst: Option<i64> = None;
    for (j, v) in a.basis().vectors().iter().enumerate() {
        if !trunc.is_safe(v, 2) {
            continue;
        }
        let ab = apply_word(&[a, b], j);
        let ba = apply_word(&[b, a], j);
        let mut diff = ab;
        for (k, c) in ba {
            *diff.entry(k).or_insert(0) -= c;
        }
        let col_max = diff.values().map(|c| c.abs()).max().unwrap_or(0);
        worst = Some(worst.map_or(col_max, |w| w.max(col_max)));
    }
    Ok(worst)
}
