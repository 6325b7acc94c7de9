//! Finite-dimensional spectral checks: eigen-decompositions of the
//! invariant blocks, norms of gapped sums, exact moments, identity
//! polynomials and commutant orbits.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use serde::Serialize;

use crate::binomial::{self, MAX_BINOMIAL_N};
use crate::error::{check_cap, Error, Result};
use crate::fock::{invariant_subspace_matrix, BasisVector, FockSpace, IndexSet, SparseOperator, TruncationSpec};
use crate::measure::AtomicMeasure;
use crate::precision::{self, MIN_PRECISION_BITS};

pub mod commutant;
pub mod identity;

pub use commutant::{commutant_orbit, counterexample, gapped_pair_matrix, CommutantOrbit, CounterexampleReport, RationalMatrix};
pub use identity::{identity_polynomial, minimal_identity_polynomial, IdentityPolynomial};

/// Residual bound for eigenpairs, `‖Av − λv‖`.
pub const EIGEN_TOLERANCE: f64 = 1e-12;
/// Largest `n` for [`spectrum_support_check`].
pub const MAX_SUPPORT_N: usize = 10;
/// Largest `n` and `k` for [`moment_oracle`].
pub const MAX_ORACLE_N: usize = 16;
pub const MAX_ORACLE_K: usize = 32;

/// Ascending eigenvalues with the squared vacuum (index 0) component of
/// each orthonormal eigenvector.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub vacuum_weights: Vec<f64>,
    pub dim: usize,
}

impl SpectralDecomposition {
    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// The vacuum spectral measure. Requires simple eigenvalues.
    pub fn to_measure(&self, label: &str) -> Result<AtomicMeasure> {
        AtomicMeasure::from_f64(&self.eigenvalues, &self.vacuum_weights, MIN_PRECISION_BITS, label)
    }
}

/// Eigen-decomposition of an exactly symmetric integer operator.
pub fn eigen_decompose(op: &SparseOperator, tol: f64) -> Result<SpectralDecomposition> {
    if !op.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    eigen_decompose_dense(&op.to_dense_f64(), tol)
}

/// Eigenvalues and orthonormal eigenvectors (as columns) of a symmetric matrix.
///
/// faer's divide-and-conquer solver keeps residuals near machine precision
/// on the 1024-dimensional blocks, where nalgebra's QR iteration does not.
fn symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let dim = m.nrows();
    let a = faer::Mat::<f64>::from_fn(dim, dim, |i, j| m[(i, j)]);
    let eig = a.selfadjoint_eigendecomposition(faer::Side::Lower);
    let s = eig.s().column_vector();
    let u = eig.u();
    let values = (0..dim).map(|k| s.read(k)).collect();
    let vectors = DMatrix::from_fn(dim, dim, |i, j| u.read(i, j));
    (values, vectors)
}

/// Eigen-decomposition of a dense matrix that must equal its transpose.
pub fn eigen_decompose_dense(m: &DMatrix<f64>, tol: f64) -> Result<SpectralDecomposition> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::InvalidArgument("matrix must be square and nonempty".into()));
    }
    if m != &m.transpose() {
        return Err(Error::NotSymmetric);
    }
    let dim = m.nrows();
    let (values, vectors) = symmetric_eigen(m);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut eigenvalues = Vec::with_capacity(dim);
    let mut vacuum_weights = Vec::with_capacity(dim);
    for &k in &order {
        let lambda = values[k];
        let v = vectors.column(k);
        let residual = (m * v - v * lambda).norm();
        if residual > tol {
            return Err(Error::Resolution(format!(
                "eigenpair residual {residual:.3e} exceeds {tol:.1e}"
            )));
        }
        eigenvalues.push(lambda);
        vacuum_weights.push(v[0] * v[0]);
    }
    Ok(SpectralDecomposition { eigenvalues, vacuum_weights, dim })
}

/// Comparison of the invariant block of `S_n` with `μ_n`.
#[derive(Clone, Debug, Serialize)]
pub struct SupportCheck {
    pub n: usize,
    pub max_atom_deviation: f64,
    pub max_weight_deviation: f64,
    pub min_vacuum_weight: f64,
    pub max_eigenvalue: f64,
    pub max_atom: f64,
}

impl SupportCheck {
    pub fn holds(&self) -> bool {
        self.max_atom_deviation < 1e-9
            && self.max_weight_deviation < 1e-9
            && self.min_vacuum_weight > 0.0
            && (self.max_eigenvalue - self.max_atom).abs() < 1e-9
    }
}

pub fn spectrum_support_report(n: usize) -> Result<SupportCheck> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    check_cap("n", n, MAX_SUPPORT_N)?;
    let dec = eigen_decompose(&invariant_subspace_matrix(&IndexSet::contiguous(n as u32)?)?, EIGEN_TOLERANCE)?;
    let law = binomial::binomial_measure_with(n, 128, MAX_BINOMIAL_N)?;
    let atoms = law.measure.atoms_f64();
    let weights = law.measure.weights_f64();
    let dev = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(SupportCheck {
        n,
        max_atom_deviation: dev(&dec.eigenvalues, atoms),
        max_weight_deviation: dev(&dec.vacuum_weights, weights),
        min_vacuum_weight: dec.vacuum_weights.iter().copied().fold(f64::INFINITY, f64::min),
        max_eigenvalue: dec.max_eigenvalue(),
        max_atom: precision::to_f64(&law.max_atom),
    })
}

/// Spectrum of the invariant block equals the support of `μ_n`, every
/// vacuum weight is positive, and the norm is the largest atom.
pub fn spectrum_support_check(n: usize) -> Result<bool> {
    Ok(spectrum_support_report(n)?.holds())
}

/// The order-preserving relabeling `θ_J = θ_{j_last} ∘ … ∘ θ_{j_1}`, where
/// `θ_h` fixes `i < h` and sends `i ≥ h` to `i + 1`. For `J` the gaps of
/// `I` below `max(I)`, it carries `{1..|I|}` onto `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftMap {
    j: Vec<u32>,
}

impl ShiftMap {
    pub fn new(mut j: Vec<u32>) -> Result<Self> {
        j.sort_unstable();
        j.dedup();
        if j.first() == Some(&0) {
            return Err(Error::IndexSet("shift indices must be positive".into()));
        }
        Ok(ShiftMap { j })
    }

    /// The map carrying `{1..|I|}` onto `I`.
    pub fn onto(set: &IndexSet) -> Self {
        ShiftMap { j: set.complement() }
    }

    pub fn gaps(&self) -> &[u32] {
        &self.j
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.j.iter().fold(i, |x, &h| if x >= h { x + 1 } else { x })
    }

    pub fn apply_vector(&self, v: &BasisVector) -> BasisVector {
        v.map_indices(|i| self.apply(i))
    }
}

/// Evidence for `‖S_I‖ = max atom of μ_{|I|}`.
#[derive(Clone, Debug, Serialize)]
pub struct GappedNorm {
    pub indices: Vec<u32>,
    /// Top eigenvalue of the invariant block of `S_I`.
    pub norm: f64,
    /// Largest atom of `μ_{|I|}`.
    pub contiguous_norm: f64,
    /// Top eigenvalue of `S_I` on the whole truncated space.
    pub full_truncation_norm: f64,
    pub equals_contiguous: bool,
}

/// Norm of `S_I` through its invariant block, after checking that the
/// block is the contiguous block relabeled by [`ShiftMap::onto`].
pub fn norm_of_gapped_sum(set: &IndexSet, trunc: TruncationSpec) -> Result<GappedNorm> {
    if set.max() > trunc.max_index {
        return Err(Error::Truncation { index: set.max(), max_index: trunc.max_index });
    }
    let n = set.len();
    let block = invariant_subspace_matrix(set)?;
    let reference = invariant_subspace_matrix(&IndexSet::contiguous(n as u32)?)?;
    let theta = ShiftMap::onto(set);
    let image: Vec<usize> = reference
        .basis()
        .vectors()
        .iter()
        .map(|v| block.basis().position(&theta.apply_vector(v)))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Structure("relabeling leaves the block".into()))?;
    for j in 0..reference.dim() {
        let tj = image[j];
        for i in 0..reference.dim() {
            let ti = image[i];
            if reference.entry(i, j) != block.entry(ti, tj) {
                return Err(Error::Structure(format!(
                    "relabeled block differs at ({}, {})",
                    reference.basis().get(i),
                    reference.basis().get(j)
                )));
            }
        }
    }
    let norm = eigen_decompose(&block, EIGEN_TOLERANCE)?.max_eigenvalue();
    let contiguous_norm = precision::to_f64(&binomial::max_atom(n, 128));
    let full = FockSpace::new(trunc).sum(set)?;
    let full_truncation_norm = symmetric_eigen(&full.to_dense_f64()).0.into_iter().fold(f64::NEG_INFINITY, f64::max);
    let equals_contiguous =
        (norm - contiguous_norm).abs() < 1e-9 && full_truncation_norm <= norm + 1e-9;
    Ok(GappedNorm { indices: set.indices().to_vec(), norm, contiguous_norm, full_truncation_norm, equals_contiguous })
}

/// [`norm_of_gapped_sum`] on the closed truncation `N = L = max(I)`.
pub fn norm_of_index_set(set: &IndexSet) -> Result<GappedNorm> {
    norm_of_gapped_sum(set, TruncationSpec::new(set.max(), set.max())?)
}

/// `⟨S_n^k Ω, Ω⟩` exactly, for `k = 0..=k_max`.
pub fn moment_oracle_sequence(n: usize, k_max: usize) -> Result<Vec<BigInt>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    check_cap("n", n, MAX_ORACLE_N)?;
    check_cap("k", k_max, MAX_ORACLE_K)?;
    let s = invariant_subspace_matrix(&IndexSet::contiguous(n as u32)?)?;
    let mut v = vec![0i128; s.dim()];
    v[0] = 1;
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(BigInt::from(1));
    // ‖S^k Ω‖ ≤ ‖S_n‖^k < 5.7^32 < 2^81, so entries fit in i128
    for _ in 0..k_max {
        v = s.apply_i128(&v)?;
        out.push(BigInt::from(v[0]));
    }
    Ok(out)
}

/// `⟨S_n^k Ω, Ω⟩` exactly.
pub fn moment_oracle(n: usize, k: usize) -> Result<BigInt> {
    Ok(moment_oracle_sequence(n, k)?.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    const PHI: f64 = 1.618_033_988_749_895;

    #[test]
    fn two_by_two() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let d = eigen_decompose_dense(&m, EIGEN_TOLERANCE).unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-15 && (d.eigenvalues[1] - 1.0).abs() < 1e-15);
        assert!(d.vacuum_weights.iter().all(|w| (w - 0.5).abs() < 1e-15));
        let bad = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(matches!(eigen_decompose_dense(&bad, EIGEN_TOLERANCE), Err(Error::NotSymmetric)));
    }

    #[test]
    fn golden_block() {
        let s2 = invariant_subspace_matrix(&IndexSet::contiguous(2).unwrap()).unwrap();
        let d = eigen_decompose(&s2, EIGEN_TOLERANCE).unwrap();
        let want = [-PHI, 1.0 - PHI, PHI - 1.0, PHI];
        for (a, b) in d.eigenvalues.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((d.vacuum_weights[3] - 0.361_803_398_874_989_5).abs() < 1e-14);
        assert!((d.vacuum_weights[2] - 0.138_196_601_125_010_5).abs() < 1e-14);
    }

    #[test]
    fn matrix_a_spectrum() {
        let d = eigen_decompose(&gapped_pair_matrix(), EIGEN_TOLERANCE).unwrap();
        assert!((d.max_eigenvalue() - PHI).abs() < 1e-14);
        for k in 0..8 {
            assert!((d.eigenvalues[k] + d.eigenvalues[7 - k]).abs() < 1e-14);
        }
    }

    #[test]
    fn support_small() {
        for n in 1..=5 {
            let r = spectrum_support_report(n).unwrap();
            assert!(r.holds(), "{r:?}");
        }
        assert!(spectrum_support_check(11).is_err());
    }

    #[test]
    fn shift_map() {
        let set = IndexSet::new(vec![2, 5, 9]).unwrap();
        let theta = ShiftMap::onto(&set);
        assert_eq!((1..=3).map(|i| theta.apply(i)).collect::<Vec<_>>(), [2, 5, 9]);
        let set = IndexSet::new(vec![1, 3]).unwrap();
        assert_eq!(ShiftMap::onto(&set).apply(2), 3);
    }

    #[test]
    fn gapped_norms() {
        let r = norm_of_index_set(&IndexSet::new(vec![1, 3]).unwrap()).unwrap();
        assert!((r.norm - PHI).abs() < 1e-12 && r.equals_contiguous);
        let r = norm_of_index_set(&IndexSet::new(vec![1, 2]).unwrap()).unwrap();
        assert!((r.norm - PHI).abs() < 1e-12 && r.equals_contiguous);
        let r = norm_of_index_set(&IndexSet::new(vec![2, 5, 9]).unwrap()).unwrap();
        assert!(r.equals_contiguous, "{r:?}");
        let small = TruncationSpec::new(4, 4).unwrap();
        assert!(norm_of_gapped_sum(&IndexSet::new(vec![2, 5]).unwrap(), small).is_err());
    }

    #[test]
    fn oracle_values() {
        assert_eq!(moment_oracle(1, 2).unwrap(), BigInt::from(1));
        assert_eq!(moment_oracle(2, 4).unwrap(), BigInt::from(5));
        assert_eq!(moment_oracle(2, 3).unwrap(), BigInt::from(0));
        assert_eq!(moment_oracle(3, 2).unwrap(), BigInt::from(3));
        assert!(moment_oracle(17, 2).is_err());
        assert!(moment_oracle(2, 33).is_err());
    }
}
