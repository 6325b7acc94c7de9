//! Exact solutions of `Σ_k α_{2k} S_n^{2k} = I`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::fock::{invariant_subspace_matrix, FockSpace, IndexSet, SparseOperator, TruncationSpec};

/// Largest `n` accepted by the solver.
pub const MAX_IDENTITY_N: usize = 6;

/// `I = Σ_{k=1}^{K} α_{2k} S_n^{2k}` with the smallest possible `K`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityPolynomial {
    pub n: usize,
    /// `α_2, α_4, …, α_{2K}`.
    #[serde(serialize_with = "ser_rationals")]
    pub coefficients: Vec<BigRational>,
    /// The conjectured bound `(n−1)n/2 + 1` on `K`.
    pub degree_bound: usize,
    /// Closed truncation on which the identity was re-checked.
    pub verified_on: (u32, u32),
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

impl IdentityPolynomial {
    /// Number of terms `K`.
    pub fn terms(&self) -> usize {
        self.coefficients.len()
    }

    pub fn within_bound(&self) -> bool {
        self.terms() <= self.degree_bound
    }

    /// Coefficients as `i64` when all are integers that fit.
    pub fn integer_coefficients(&self) -> Option<Vec<i64>> {
        self.coefficients
            .iter()
            .map(|q| q.is_integer().then(|| i64::try_from(q.to_integer()).ok()).flatten())
            .collect()
    }
}

pub fn degree_bound(n: usize) -> usize {
    (n - 1) * n / 2 + 1
}

fn apply(op: &SparseOperator, x: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); x.len()];
    for (k, xk) in x.iter().enumerate() {
        if xk.is_zero() {
            continue;
        }
        for &(i, a) in op.column(k) {
            out[i] += xk * BigRational::from_integer(BigInt::from(a));
        }
    }
    out
}

/// Unique solution of `Σ_k c_k cols[k] = rhs`, if one exists.
fn solve(cols: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let k = cols.len();
    let rows = rhs.len();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| cols.iter().map(|c| c[i].clone()).chain(std::iter::once(rhs[i].clone())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=k {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[k].is_zero()) || pivots.len() < k {
        return None;
    }
    Some((0..k).map(|i| m[i][k].clone()).collect())
}

/// `Σ α_k (S²)^k x` for a vector `x`.
fn apply_polynomial(s: &SparseOperator, alpha: &[BigRational], x: Vec<BigRational>) -> Vec<BigRational> {
    let mut acc = vec![BigRational::zero(); x.len()];
    let mut cur = x;
    for a in alpha {
        cur = apply(s, &apply(s, &cur));
        for (slot, v) in acc.iter_mut().zip(&cur) {
            *slot += a * v;
        }
    }
    acc
}

fn is_identity_on(s: &SparseOperator, alpha: &[BigRational]) -> bool {
    let dim = s.dim();
    (0..dim).all(|j| {
        let mut e = vec![BigRational::zero(); dim];
        e[j] = BigRational::one();
        let out = apply_polynomial(s, alpha, e.clone());
        out == e
    })
}

/// The shortest `α` with `Σ_{k=1}^{K} α_{2k} S_n^{2k} = I`, whatever `K`.
///
/// Solved on the vacuum: Ω is cyclic for the invariant block, so
/// `p(S_n²)Ω = Ω` forces `p(S_n²) = I` there. The result is re-checked as a
/// matrix identity on the block and on the closed truncation `N = L = n+2`.
pub fn minimal_identity_polynomial(n: usize) -> Result<IdentityPolynomial> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    check_cap("n", n, MAX_IDENTITY_N)?;
    let s = invariant_subspace_matrix(&IndexSet::contiguous(n as u32)?)?;
    let dim = s.dim();
    let mut omega = vec![BigRational::zero(); dim];
    omega[0] = BigRational::one();

    // S² has at most dim/2 distinct eigenvalues on the block
    let mut krylov: Vec<Vec<BigRational>> = Vec::new();
    let mut cur = omega.clone();
    let mut found = None;
    for _ in 0..dim / 2 + 1 {
        cur = apply(&s, &apply(&s, &cur));
        krylov.push(cur.clone());
        if let Some(alpha) = solve(&krylov, &omega) {
            found = Some(alpha);
            break;
        }
    }
    let alpha = found.ok_or_else(|| Error::Structure(format!("no identity polynomial for n = {n}")))?;

    if !is_identity_on(&s, &alpha) {
        return Err(Error::Structure("identity fails on the invariant block".into()));
    }
    let big = (n + 2) as u32;
    let wide = FockSpace::new(TruncationSpec::new(big, big)?).sum(&IndexSet::contiguous(n as u32)?)?;
    if !is_identity_on(&wide, &alpha) {
        return Err(Error::Structure(format!("identity fails on the truncation N = L = {big}")));
    }
    Ok(IdentityPolynomial { n, coefficients: alpha, degree_bound: degree_bound(n), verified_on: (big, big) })
}

/// The minimal identity polynomial, provided it has at most
/// `(n−1)n/2 + 1` terms; otherwise a [`Error::ConjectureBound`] carrying
/// the minimal length found.
pub fn identity_polynomial(n: usize) -> Result<IdentityPolynomial> {
    let p = minimal_identity_polynomial(n)?;
    if p.within_bound() {
        Ok(p)
    } else {
        Err(Error::ConjectureBound { n, bound: p.degree_bound, minimal: Some(p.terms()) })
    }
}
