//! The monotone binomial law `μ_n`, the vacuum law of `s_1 + … + s_n`.
//!
//! `μ_n = μ_{n−1} ▷ μ_1`: each atom `a` of `μ_{n−1}` splits into the two
//! solutions of `(r² − 1)/r = a`, and the child `r` inherits `w·r²/(1+r²)`
//! of its parent's weight.

use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::measure::{bernoulli_children, split_atom, kolmogorov_distance_sorted, AtomicMeasure, ArcsineLaw};
use crate::precision::{self, Real, DEFAULT_PRECISION_BITS};

/// Default cap on `n` (`2^24` atoms).
pub const MAX_BINOMIAL_N: usize = 24;

/// `((a − √(a²+4))/2, (a + √(a²+4))/2)`, the solutions of `(r²−1)/r = a`.
pub fn children_atoms(a: &Real) -> (Real, Real) {
    let (minus, plus, _) = split_atom(a, &precision::from_i64(4, a.precision().max(64)));
    (minus, plus)
}

/// `w · r² / (1 + r²)`.
pub fn child_weight(w_parent: &Real, r_child: &Real) -> Result<Real> {
    if r_child.repr().significand().is_zero() {
        return Err(Error::InvalidArgument("child atom must be nonzero".into()));
    }
    let r2 = r_child * r_child;
    Ok(w_parent * &r2 / (precision::from_i64(1, r2.precision().max(64)) + &r2))
}

/// `μ_n` with its largest atom and the bounds `√(2n − √(2n)) ≤ max < √(2n)`.
#[derive(Clone, Debug)]
pub struct BinomialLawRecord {
    pub n: usize,
    pub measure: AtomicMeasure,
    pub max_atom: Real,
    pub bounds: (Real, Real),
}

impl BinomialLawRecord {
    /// `lower ≤ max_atom < upper`.
    pub fn sandwich_holds(&self) -> bool {
        self.bounds.0 <= self.max_atom && self.max_atom < self.bounds.1
    }

    /// Positive atoms pair up as `r · r′ = 1`, to within `tol`.
    pub fn inverse_pairs_hold(&self, tol: f64) -> bool {
        let atoms = self.measure.atoms();
        let half = atoms.len() / 2;
        let positive = &atoms[half..];
        let k = positive.len();
        let one = precision::from_i64(1, self.measure.precision_bits());
        (0..k).all(|j| {
            let d = &positive[j] * &positive[k - 1 - j] - &one;
            precision::to_f64(&d).abs() <= tol
        })
    }
}

pub fn binomial_measure(n: usize) -> Result<BinomialLawRecord> {
    binomial_measure_with(n, DEFAULT_PRECISION_BITS, MAX_BINOMIAL_N)
}

/// [`binomial_measure`] at a chosen precision and cap.
pub fn binomial_measure_with(n: usize, precision_bits: usize, cap: usize) -> Result<BinomialLawRecord> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    check_cap("n", n, cap)?;
    let mut atoms = vec![precision::from_i64(0, precision_bits)];
    let mut weights = vec![precision::from_i64(1, precision_bits)];
    for _ in 0..n {
        (atoms, weights) = bernoulli_children(&atoms, &weights, precision_bits);
    }
    let measure = AtomicMeasure::new(atoms, weights, precision_bits, format!("binomial(n={n})"))?;
    let max_atom = measure.max_atom().clone();
    Ok(BinomialLawRecord { n, measure, max_atom, bounds: endpoint_bounds(n, precision_bits) })
}

/// Largest atom of `μ_n` alone, following the top branch `n` times.
pub fn max_atom(n: usize, precision_bits: usize) -> Real {
    let mut a = precision::from_i64(0, precision_bits);
    for _ in 0..n {
        a = children_atoms(&a).1;
    }
    a
}

/// `(√(2n − √(2n)), √(2n))`.
pub fn endpoint_bounds(n: usize, precision_bits: usize) -> (Real, Real) {
    let two_n = precision::from_i64(2 * n as i64, precision_bits);
    let upper = precision::sqrt(&two_n);
    let lower = precision::sqrt(&(&two_n - &upper));
    (lower, upper)
}

/// `(2/√n − 1/√(n+1)) · max_n < √((max_n² + 4)/(n+1))`, which makes
/// `max_n / √n` increasing.
pub fn monotonicity_inequality(n: usize, max_atom: f64) -> bool {
    let n = n as f64;
    (2.0 / n.sqrt() - 1.0 / (n + 1.0).sqrt()) * max_atom < ((max_atom * max_atom + 4.0) / (n + 1.0)).sqrt()
}

/// The weight expression
/// `∏_h (r_k − r_h^{(n−1)}) / (2 ∏_{h≠k} (r_k − r_h^{(n)}))`.
///
/// Kept for comparison only. For `n = 2` it yields `±1/(4√5)` at every
/// atom (negative on the negative atoms), so even the absolute values only
/// add up to `1/√5`, not 1.
pub fn printed_weight_formula(k: usize, atoms_n: &[Real], atoms_prev: &[Real]) -> Result<Real> {
    if atoms_prev.is_empty() || atoms_n.len() != 2 * atoms_prev.len() {
        return Err(Error::InvalidArgument(format!(
            "need 2^n atoms and 2^(n-1) parents, got {} and {}",
            atoms_n.len(),
            atoms_prev.len()
        )));
    }
    let rk = atoms_n
        .get(k)
        .ok_or_else(|| Error::InvalidArgument(format!("atom index {k} out of range")))?;
    let mut num = precision::from_i64(1, rk.precision().max(64));
    for r in atoms_prev {
        num *= rk - r;
    }
    let mut den = precision::from_i64(2, rk.precision().max(64));
    for (h, r) in atoms_n.iter().enumerate() {
        if h == k {
            continue;
        }
        let d = rk - r;
        if d.repr().significand().is_zero() {
            return Err(Error::InvalidArgument(format!("duplicate atoms at {h} and {k}")));
        }
        den *= d;
    }
    Ok(num / den)
}

/// Sorted `(atom, weight)` pairs of `μ_n` in `f64`, generated one at a
/// time without storing the measure.
///
/// Bit `ℓ` of the sorted index (least significant first) selects the lower
/// or upper child at generation `ℓ + 1`.
#[derive(Clone, Debug)]
pub struct StreamingBinomial {
    n: usize,
    next: u64,
}

impl StreamingBinomial {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        check_cap("n", n, 40)?;
        Ok(StreamingBinomial { n, next: 0 })
    }

    fn pair(&self, k: u64) -> (f64, f64) {
        let (mut a, mut w) = (0f64, 1f64);
        for level in 0..self.n {
            let s = (a * a + 4.0).sqrt();
            if (k >> level) & 1 == 1 {
                // (a + s)/2 computed without cancellation for a < 0
                let r = if a >= 0.0 { (a + s) / 2.0 } else { 2.0 / (s - a) };
                w *= r / s;
                a = r;
            } else {
                let r = if a <= 0.0 { (a - s) / 2.0 } else { -2.0 / (s + a) };
                w *= -r / s;
                a = r;
            }
        }
        (a, w)
    }
}

impl Iterator for StreamingBinomial {
    type Item = (f64, f64);

    fn next(&mut self) -> Option<(f64, f64)> {
        if self.next >> self.n != 0 {
            return None;
        }
        let out = self.pair(self.next);
        self.next += 1;
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = ((1u64 << self.n) - self.next) as usize;
        (left, Some(left))
    }
}

/// One row of [`clt_table`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CltRow {
    pub n: usize,
    pub max_atom: f64,
    /// `max_atom / √n`.
    pub ratio: f64,
    /// Kolmogorov distance of `μ_n(√n ·)` to the arcsine law.
    pub ks_distance: f64,
}

pub fn clt_row(n: usize) -> Result<CltRow> {
    let max = precision::to_f64(&max_atom(n, DEFAULT_PRECISION_BITS));
    let scale = (n as f64).sqrt();
    let ks = kolmogorov_distance_sorted(StreamingBinomial::new(n)?, &ArcsineLaw, scale)?;
    Ok(CltRow { n, max_atom: max, ratio: max / scale, ks_distance: ks })
}

/// Rows `n = 1..=max_n`.
pub fn clt_table(max_n: usize) -> Result<Vec<CltRow>> {
    clt_table_with_cap(max_n, MAX_BINOMIAL_N)
}

pub fn clt_table_with_cap(max_n: usize, cap: usize) -> Result<Vec<CltRow>> {
    check_cap("max_n", max_n, cap)?;
    (1..=max_n).map(clt_row).collect()
}
