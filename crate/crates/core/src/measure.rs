//! Finitely atomic probability measures on the real line.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::Write as _;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{sturm_isolate, IntPoly};
use crate::precision::{self, Real, MIN_PRECISION_BITS};

/// Extra bits used when summing masses or refining convolution roots.
const GUARD_BITS: usize = 32;

/// `Σ w_k δ_{r_k}` with strictly increasing atoms and positive weights,
/// carried at a fixed binary precision.
#[derive(Clone, Debug)]
pub struct AtomicMeasure {
    atoms: Vec<Real>,
    weights: Vec<Real>,
    atoms_f64: Vec<f64>,
    weights_f64: Vec<f64>,
    precision_bits: usize,
    label: String,
}

/// Serialized form; numbers are rounded to `f64`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureJson {
    pub atoms: Vec<f64>,
    pub weights: Vec<f64>,
    pub precision_bits: usize,
    pub label: String,
}

impl AtomicMeasure {
    /// Validates and wraps atoms and weights.
    ///
    /// Atoms must increase by more than `2^-(p-16)`, weights must be
    /// positive, and the total mass must be within `2^(8-p)` of 1, where
    /// `p = precision_bits`.
    pub fn new(
        atoms: Vec<Real>,
        weights: Vec<Real>,
        precision_bits: usize,
        label: impl Into<String>,
    ) -> Result<Self> {
        Self::validate(&atoms, &weights, precision_bits, precision_bits)?;
        Ok(Self::assemble(atoms, weights, precision_bits, label.into()))
    }

    fn assemble(atoms: Vec<Real>, weights: Vec<Real>, precision_bits: usize, label: String) -> Self {
        let atoms_f64 = atoms.iter().map(precision::to_f64).collect();
        let weights_f64 = weights.iter().map(precision::to_f64).collect();
        AtomicMeasure { atoms, weights, atoms_f64, weights_f64, precision_bits, label }
    }

    fn validate(atoms: &[Real], weights: &[Real], precision_bits: usize, mass_bits: usize) -> Result<()> {
        if precision_bits < MIN_PRECISION_BITS {
            return Err(Error::InvalidArgument(format!(
                "precision_bits must be at least {MIN_PRECISION_BITS}"
            )));
        }
        if atoms.is_empty() || atoms.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        let gap = precision::pow2_neg(precision_bits.saturating_sub(16), precision_bits);
        for (k, pair) in atoms.windows(2).enumerate() {
            let d = &pair[1] - &pair[0];
            if precision::is_negative(&d) {
                return Err(Error::InvalidMeasure(format!("atoms not increasing at index {}", k + 1)));
            }
            if d <= gap {
                return Err(Error::Resolution(format!(
                    "atoms {k} and {} collide within 2^-{}; precision exhausted",
                    k + 1,
                    precision_bits.saturating_sub(16)
                )));
            }
        }
        let acc_bits = precision_bits + GUARD_BITS;
        let mut mass = precision::from_i64(0, acc_bits);
        for (k, w) in weights.iter().enumerate() {
            if precision::is_negative(w) || w.repr().significand().is_zero() {
                return Err(Error::InvalidMeasure(format!("weight {k} is not positive")));
            }
            mass += w.clone().with_precision(acc_bits).value();
        }
        let defect = precision::abs(&(mass - precision::from_i64(1, acc_bits)));
        let tol = precision::pow2_neg(mass_bits.saturating_sub(8), acc_bits);
        if defect > tol {
            return Err(Error::InvalidMeasure(format!(
                "total mass differs from 1 by {:.3e}",
                precision::to_f64(&defect)
            )));
        }
        Ok(())
    }

    /// `½(δ_{-1} + δ_1)`.
    pub fn bernoulli(precision_bits: usize) -> Result<Self> {
        let half = precision::from_rational(&BigRational::new(1.into(), 2.into()), precision_bits);
        Self::new(
            vec![precision::from_i64(-1, precision_bits), precision::from_i64(1, precision_bits)],
            vec![half.clone(), half],
            precision_bits,
            "bernoulli",
        )
    }

    /// Point mass at `x`.
    pub fn dirac(x: Real, precision_bits: usize) -> Result<Self> {
        Self::new(vec![x], vec![precision::from_i64(1, precision_bits)], precision_bits, "dirac")
    }

    /// From `f64` data. Mass is checked at `f64` resolution regardless of
    /// the declared precision; the weights are then renormalized to mass 1
    /// at that precision.
    pub fn from_f64(
        atoms: &[f64],
        weights: &[f64],
        precision_bits: usize,
        label: impl Into<String>,
    ) -> Result<Self> {
        if atoms.iter().chain(weights).any(|x| !x.is_finite()) {
            return Err(Error::InvalidMeasure("non-finite value".into()));
        }
        let a: Vec<Real> = atoms.iter().map(|&x| precision::from_f64(x, precision_bits)).collect();
        let w: Vec<Real> = weights.iter().map(|&x| precision::from_f64(x, precision_bits)).collect();
        // f64 input: collisions and mass are judged at double precision,
        // then the weights are rescaled so the mass is 1 at full precision
        Self::validate(&a, &w, MIN_PRECISION_BITS, MIN_PRECISION_BITS)?;
        let bits = precision_bits.max(MIN_PRECISION_BITS);
        let acc_bits = bits + GUARD_BITS;
        let mut mass = precision::from_i64(0, acc_bits);
        for x in &w {
            mass += x.clone().with_precision(acc_bits).value();
        }
        let w = w.into_iter().map(|x| (x.with_precision(acc_bits).value() / &mass).with_precision(bits).value()).collect();
        Ok(Self::assemble(a, w, bits, label.into()))
    }

    pub fn atoms(&self) -> &[Real] {
        &self.atoms
    }

    pub fn weights(&self) -> &[Real] {
        &self.weights
    }

    pub fn atoms_f64(&self) -> &[f64] {
        &self.atoms_f64
    }

    pub fn weights_f64(&self) -> &[f64] {
        &self.weights_f64
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn max_atom(&self) -> &Real {
        self.atoms.last().unwrap()
    }

    /// Invariant under `x ↦ −x`, judged to within `tol`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.len();
        (0..n).all(|k| {
            (self.atoms_f64[k] + self.atoms_f64[n - 1 - k]).abs() <= tol
                && (self.weights_f64[k] - self.weights_f64[n - 1 - k]).abs() <= tol
        })
    }

    /// Largest atom or weight difference; `None` if the atom counts differ.
    pub fn max_deviation(&self, other: &AtomicMeasure) -> Option<f64> {
        if self.len() != other.len() {
            return None;
        }
        let bits = self.precision_bits.min(other.precision_bits);
        let mut worst = 0f64;
        for k in 0..self.len() {
            let da = precision::abs(&(&self.atoms[k] - &other.atoms[k]).with_precision(bits).value());
            let dw = precision::abs(&(&self.weights[k] - &other.weights[k]).with_precision(bits).value());
            worst = worst.max(precision::to_f64(&da).abs()).max(precision::to_f64(&dw).abs());
        }
        Some(worst)
    }

    pub fn to_json(&self) -> MeasureJson {
        MeasureJson {
            atoms: self.atoms_f64.clone(),
            weights: self.weights_f64.clone(),
            precision_bits: self.precision_bits,
            label: self.label.clone(),
        }
    }

    pub fn from_json(json: &MeasureJson) -> Result<Self> {
        Self::from_f64(&json.atoms, &json.weights, json.precision_bits, json.label.clone())
    }

    /// `atom,weight` rows with a header; `digits` significant digits.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from("atom,weight\n");
        for (a, w) in self.atoms.iter().zip(&self.weights) {
            let _ = writeln!(
                out,
                "{},{}",
                precision::to_decimal_string(a, digits),
                precision::to_decimal_string(w, digits)
            );
        }
        out
    }
}

/// `G_μ(z) = Σ w_k / (z − r_k)`.
pub fn cauchy_transform(mu: &AtomicMeasure, z: Complex64) -> Result<Complex64> {
    let mut g = Complex64::zero();
    for (&r, &w) in mu.atoms_f64.iter().zip(&mu.weights_f64) {
        let d = z - r;
        if d.norm() <= 1e-12 * r.abs().max(1.0) {
            return Err(Error::Pole(format!("{z}")));
        }
        g += w / d;
    }
    Ok(g)
}

/// `H_μ(z) = 1 / G_μ(z)`.
pub fn reciprocal_cauchy(mu: &AtomicMeasure, z: Complex64) -> Result<Complex64> {
    let g = cauchy_transform(mu, z)?;
    let scale: f64 = mu
        .atoms_f64
        .iter()
        .zip(&mu.weights_f64)
        .map(|(&r, &w)| w / (z - r).norm())
        .sum();
    if g.norm() <= 1e-14 * scale {
        return Err(Error::ZeroDivision(format!("{z}")));
    }
    Ok(g.inv())
}

/// `Σ w_k r_k^k`, at the measure's precision.
pub fn moments(mu: &AtomicMeasure, k: u32) -> Real {
    moment_sequence(mu, k).pop().unwrap()
}

/// Moments of orders `0..=k_max`.
pub fn moment_sequence(mu: &AtomicMeasure, k_max: u32) -> Vec<Real> {
    let bits = mu.precision_bits + GUARD_BITS;
    let mut out = vec![precision::from_i64(0, bits); k_max as usize + 1];
    for (r, w) in mu.atoms.iter().zip(&mu.weights) {
        let r = r.clone().with_precision(bits).value();
        let mut term = w.clone().with_precision(bits).value();
        for slot in out.iter_mut() {
            *slot += &term;
            term *= &r;
        }
    }
    out.into_iter().map(|m| m.with_precision(mu.precision_bits).value()).collect()
}

/// `μ ▷ ν`, the measure whose reciprocal Cauchy transform is `H_μ ∘ H_ν`.
///
/// Atoms are the solutions `r` of `H_ν(r) = a` for each atom `a` of `μ`,
/// weighted by `w_a / H_ν′(r)`. When `ν` is the symmetric Bernoulli law the
/// two solutions are given in closed form; otherwise `G_ν = N/D` is cleared
/// to the exact polynomial `D − aN` and its roots are isolated.
pub fn monotone_convolve(mu: &AtomicMeasure, nu: &AtomicMeasure) -> Result<AtomicMeasure> {
    let bits = mu.precision_bits.min(nu.precision_bits);
    let label = format!("({}) ▷ ({})", mu.label, nu.label);
    if is_bernoulli(nu) {
        let (atoms, weights) = bernoulli_children(&mu.atoms, &mu.weights, bits);
        return AtomicMeasure::new(atoms, weights, bits, label);
    }
    monotone_convolve_by_roots(mu, nu)
}

/// [`monotone_convolve`] without the Bernoulli shortcut: every fiber
/// `H_ν(r) = a` is solved by exact root isolation.
pub fn monotone_convolve_by_roots(mu: &AtomicMeasure, nu: &AtomicMeasure) -> Result<AtomicMeasure> {
    let bits = mu.precision_bits.min(nu.precision_bits);
    let label = format!("({}) ▷ ({})", mu.label, nu.label);

    // G_ν = N/D with D = ∏ (z − x_j), N = Σ w_j ∏_{i≠j} (z − x_i)
    let xs: Vec<BigRational> = nu.atoms.iter().map(precision::to_rational).collect();
    let ws: Vec<BigRational> = nu.weights.iter().map(precision::to_rational).collect();
    let d = rational_product(&xs, None);
    let mut n = vec![BigRational::zero(); xs.len()];
    for (j, w) in ws.iter().enumerate() {
        for (k, c) in rational_product(&xs, Some(j)).iter().enumerate() {
            n[k] += w * c;
        }
    }
    let dd = rational_derivative(&d);
    let dn = rational_derivative(&n);

    let mut pairs: Vec<(BigRational, Real)> = Vec::with_capacity(mu.len() * nu.len());
    for (a, wa) in mu.atoms.iter().zip(&mu.weights) {
        let a = precision::to_rational(a);
        let mut f = d.clone();
        for (k, c) in n.iter().enumerate() {
            f[k] -= &a * c;
        }
        let poly = IntPoly::from_rationals(&f);
        let roots = sturm_isolate(&poly)?;
        if roots.len() != nu.len() {
            return Err(Error::Resolution(format!(
                "expected {} real solutions of H_ν(r) = a, found {}",
                nu.len(),
                roots.len()
            )));
        }
        let wa = precision::to_rational(wa);
        for mut ri in roots {
            ri.refine(bits + GUARD_BITS);
            let r = ri.midpoint();
            // residue of G_μ(H_ν(z)) at r: w_a N(r) / (D′(r) − a N′(r))
            let den = eval(&dd, &r) - &a * eval(&dn, &r);
            if den.is_zero() {
                return Err(Error::Resolution("double root in monotone convolution".into()));
            }
            let w = &wa * eval(&n, &r) / den;
            pairs.push((r, precision::from_rational(&w, bits)));
        }
    }
    pairs.sort_by(|x, y| x.0.cmp(&y.0));
    let (atoms, weights) = pairs
        .into_iter()
        .map(|(r, w)| (precision::from_rational(&r, bits), w))
        .unzip();
    AtomicMeasure::new(atoms, weights, bits, label)
}

fn is_bernoulli(nu: &AtomicMeasure) -> bool {
    nu.len() == 2
        && nu.atoms_f64 == [-1.0, 1.0]
        && nu.weights_f64 == [0.5, 0.5]
        && nu.atoms.iter().all(|a| precision::abs(a) == precision::from_i64(1, 64))
        && nu.weights[0] == nu.weights[1]
}

/// Closed-form `μ ▷ Bernoulli`: each atom `a` splits into
/// `r± = (a ± √(a²+4))/2` carrying `w·r₊/s` and `−w·r₋/s`, `s = √(a²+4)`.
///
/// Both branches increase with `a` and `r₋ < 0 < r₊`, so the output is
/// sorted without a sort.
pub(crate) fn bernoulli_children(atoms: &[Real], weights: &[Real], bits: usize) -> (Vec<Real>, Vec<Real>) {
    let four = precision::from_i64(4, bits);
    let mut lo_atoms = Vec::with_capacity(atoms.len());
    let mut lo_weights = Vec::with_capacity(atoms.len());
    let mut hi_atoms = Vec::with_capacity(atoms.len());
    let mut hi_weights = Vec::with_capacity(atoms.len());
    for (a, w) in atoms.iter().zip(weights) {
        let a = a.clone().with_precision(bits).value();
        let (minus, plus, s) = split_atom(&a, &four);
        let ws = w / &s;
        let lo_w: Real = &ws * &minus;
        lo_weights.push(-lo_w);
        hi_weights.push(&ws * &plus);
        lo_atoms.push(minus);
        hi_atoms.push(plus);
    }
    lo_atoms.extend(hi_atoms);
    lo_weights.extend(hi_weights);
    (lo_atoms, lo_weights)
}

/// `(r₋, r₊, s)` with `s = √(a²+4)`. The child of smaller modulus is
/// taken as `−1/r` of the other to avoid cancellation.
pub(crate) fn split_atom(a: &Real, four: &Real) -> (Real, Real, Real) {
    let s = precision::sqrt(&(a * a + four));
    let one = precision::from_i64(1, s.precision());
    if precision::is_negative(a) {
        let minus: Real = (a - &s) / 2;
        let plus = -(&one / &minus);
        (minus, plus, s)
    } else {
        let plus: Real = (a + &s) / 2;
        let minus = -(&one / &plus);
        (minus, plus, s)
    }
}

/// Coefficients of `∏_{i ≠ skip} (z − x_i)`.
fn rational_product(xs: &[BigRational], skip: Option<usize>) -> Vec<BigRational> {
    let mut c = vec![BigRational::one()];
    for (i, x) in xs.iter().enumerate() {
        if Some(i) == skip {
            continue;
        }
        let mut next = vec![BigRational::zero(); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= x * ck;
        }
        c = next;
    }
    c
}

fn rational_derivative(c: &[BigRational]) -> Vec<BigRational> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, ck)| ck * BigRational::from_integer(k.into()))
        .collect()
}

fn eval(c: &[BigRational], x: &BigRational) -> BigRational {
    c.iter().rev().fold(BigRational::zero(), |acc, ck| acc * x + ck)
}

/// The arcsine law on `(−√2, √2)`, density `1/(π√(2−x²))`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ArcsineLaw;

impl ArcsineLaw {
    pub fn density(&self, x: f64) -> f64 {
        if x.abs() >= std::f64::consts::SQRT_2 {
            0.0
        } else {
            1.0 / (PI * (2.0 - x * x).sqrt())
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let u = (x * FRAC_1_SQRT_2).clamp(-1.0, 1.0);
        0.5 + u.asin() / PI
    }

    pub fn quantile(&self, p: f64) -> f64 {
        std::f64::consts::SQRT_2 * (PI * (p.clamp(0.0, 1.0) - 0.5)).sin()
    }

    /// Total mass by `nodes`-point Gauss–Chebyshev quadrature.
    pub fn quadrature_mass(&self, nodes: usize) -> f64 {
        // x = √2 u turns the density into 1/(π√(1−u²)); weights are π/nodes
        (0..nodes)
            .map(|k| {
                let u = (PI * (2 * k + 1) as f64 / (2 * nodes) as f64).cos();
                let x = std::f64::consts::SQRT_2 * u;
                self.density(x) * (2.0 - x * x).sqrt() * PI / nodes as f64
            })
            .sum()
    }

    /// `nodes` equal-weight atoms at the midpoint quantiles.
    pub fn discretize(&self, nodes: usize) -> Result<AtomicMeasure> {
        let atoms: Vec<f64> = (0..nodes).map(|k| self.quantile((k as f64 + 0.5) / nodes as f64)).collect();
        let weights = vec![1.0 / nodes as f64; nodes];
        AtomicMeasure::from_f64(&atoms, &weights, MIN_PRECISION_BITS, format!("arcsine_quantiles({nodes})"))
    }
}

/// `sup_x |F_μ(x·scale) − F(x)|` for the arcsine CDF `F`.
pub fn kolmogorov_distance(mu: &AtomicMeasure, law: &ArcsineLaw, scale: f64) -> Result<f64> {
    kolmogorov_distance_sorted(mu.atoms_f64.iter().copied().zip(mu.weights_f64.iter().copied()), law, scale)
}

/// [`kolmogorov_distance`] over `(atom, weight)` pairs streamed in
/// ascending atom order.
pub fn kolmogorov_distance_sorted(
    pairs: impl IntoIterator<Item = (f64, f64)>,
    law: &ArcsineLaw,
    scale: f64,
) -> Result<f64> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {scale}")));
    }
    let mut cum = 0.0;
    let mut worst = 0.0f64;
    for (r, w) in pairs {
        let f = law.cdf(r / scale);
        worst = worst.max((cum - f).abs());
        cum += w;
        worst = worst.max((cum - f).abs());
    }
    Ok(worst)
}
