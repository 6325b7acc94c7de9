//! Exact commutants `{B : [A, B] = 0}` and the vacuum orbit `span{BΩ}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::fock::{FockSpace, IndexSet, SparseOperator, TruncationSpec};

/// Dense matrix of exact rationals, row-major.
pub type RationalMatrix = Vec<Vec<BigRational>>;

/// Largest matrix dimension accepted by [`commutant_orbit`].
pub const MAX_COMMUTANT_DIM: usize = 64;

/// The 8×8 matrix of `S_{1,3}` on the basis
/// `Ω, (1), (2), (3), (1,2), (1,3), (2,3), (1,2,3)`.
pub const MATRIX_A: [[i64; 8]; 8] = [
    [0, 1, 0, 1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [1, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 1, 0],
];

/// `S_{1,3}` on the closed truncation `N = L = 3`; equal to [`MATRIX_A`].
pub fn gapped_pair_matrix() -> SparseOperator {
    let set = IndexSet::new(vec![1, 3]).expect("valid index set");
    FockSpace::new(TruncationSpec::new(3, 3).expect("valid truncation"))
        .sum(&set)
        .expect("indices within truncation")
}

pub fn rational_matrix(op: &SparseOperator) -> RationalMatrix {
    op.to_dense_i64()
        .into_iter()
        .map(|row| row.into_iter().map(|x| BigRational::from_integer(x.into())).collect())
        .collect()
}

/// The commutant of `A` and the orbit of the first basis vector under it.
#[derive(Clone, Debug)]
pub struct CommutantOrbit {
    pub generator_matrix: RationalMatrix,
    /// A basis of the commutant; each element is a row-major `dim × dim` matrix.
    pub commutant_basis: Vec<Vec<BigRational>>,
    /// Mutually orthogonal (not normalized) basis of `span{BΩ}`.
    pub orbit_span: Vec<Vec<BigRational>>,
    /// `orbit_span` normalized in `f64`.
    pub orbit_basis: Vec<Vec<f64>>,
}

impl CommutantOrbit {
    pub fn dim(&self) -> usize {
        self.generator_matrix.len()
    }

    pub fn orbit_dimension(&self) -> usize {
        self.orbit_span.len()
    }

    pub fn spans_full_space(&self) -> bool {
        self.orbit_dimension() == self.dim()
    }

    /// `B_ij = 0` for every `B` in the commutant.
    pub fn entry_vanishes(&self, i: usize, j: usize) -> bool {
        let d = self.dim();
        self.commutant_basis.iter().all(|b| b[i * d + j].is_zero())
    }

    /// Coordinate `k` of every orbit vector is exactly zero.
    pub fn coordinate_vanishes(&self, k: usize) -> bool {
        self.commutant_basis.iter().all(|b| b[k * self.dim()].is_zero())
    }

    /// Largest `|coordinate k|` over the orthonormal orbit basis.
    pub fn coordinate_max(&self, k: usize) -> f64 {
        self.orbit_basis.iter().map(|v| v[k].abs()).fold(0.0, f64::max)
    }
}

/// Integer rows kept primitive, indexed by their smallest variable.
struct Echelon {
    pivots: BTreeMap<usize, BTreeMap<usize, BigInt>>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { pivots: BTreeMap::new() }
    }

    fn primitive(row: &mut BTreeMap<usize, BigInt>) {
        row.retain(|_, c| !c.is_zero());
        let g = row.values().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g > BigInt::from(1) {
            for c in row.values_mut() {
                *c /= &g;
            }
        }
    }

    /// Reduces `row` against the stored pivots and stores what is left.
    fn insert(&mut self, mut row: BTreeMap<usize, BigInt>) {
        Self::primitive(&mut row);
        loop {
            let Some(lead) = row.keys().find(|k| self.pivots.contains_key(k)).copied() else { break };
            let p = &self.pivots[&lead];
            let (cp, cr) = (p[&lead].clone(), row[&lead].clone());
            let g = cp.gcd(&cr);
            let (mp, mr) = (&cr / &g, &cp / &g);
            for c in row.values_mut() {
                *c *= &mr;
            }
            for (k, c) in p {
                *row.entry(*k).or_insert_with(BigInt::zero) -= &mp * c;
            }
            Self::primitive(&mut row);
        }
        if let Some((&lead, _)) = row.iter().next() {
            self.pivots.insert(lead, row);
        }
    }

    /// Basis of the solution space in `vars` unknowns.
    fn nullspace(&self, vars: usize) -> Vec<Vec<BigRational>> {
        let free: Vec<usize> = (0..vars).filter(|v| !self.pivots.contains_key(v)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![BigRational::zero(); vars];
                x[f] = BigRational::from_integer(1.into());
                // pivot rows only involve larger variables
                for (&p, row) in self.pivots.iter().rev() {
                    let mut acc = BigRational::zero();
                    for (&k, c) in row.range(p + 1..) {
                        if !x[k].is_zero() {
                            acc += &x[k] * BigRational::from_integer(c.clone());
                        }
                    }
                    x[p] = -acc / BigRational::from_integer(row[&p].clone());
                }
                x
            })
            .collect()
    }
}

/// Solves `[A, B] = 0` exactly and returns the commutant together with an
/// orthogonal basis of `{BΩ}` (Ω = first basis vector).
pub fn commutant_orbit(a: &RationalMatrix) -> Result<CommutantOrbit> {
    let d = a.len();
    check_cap("dim", d, MAX_COMMUTANT_DIM)?;
    if d == 0 || a.iter().any(|row| row.len() != d) {
        return Err(Error::InvalidArgument("matrix must be square and nonempty".into()));
    }
    // clear denominators once: [λA, B] = 0 has the same solutions
    let lcm = a.iter().flatten().fold(BigInt::from(1), |l, q| l.lcm(q.denom()));
    let ai: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer()).collect())
        .collect();

    // (AB − BA)_{ij} = Σ_k A_ik B_kj − B_ik A_kj, variable B_kj ↦ k·d + j
    let mut ech = Echelon::new();
    for i in 0..d {
        for j in 0..d {
            let mut row: BTreeMap<usize, BigInt> = BTreeMap::new();
            for k in 0..d {
                if !ai[i][k].is_zero() {
                    *row.entry(k * d + j).or_insert_with(BigInt::zero) += &ai[i][k];
                }
                if !ai[k][j].is_zero() {
                    *row.entry(i * d + k).or_insert_with(BigInt::zero) -= &ai[k][j];
                }
            }
            ech.insert(row);
        }
    }
    let commutant_basis = ech.nullspace(d * d);

    // BΩ is column 0 of B
    let mut orbit_span: Vec<Vec<BigRational>> = Vec::new();
    for b in &commutant_basis {
        let mut v: Vec<BigRational> = (0..d).map(|i| b[i * d].clone()).collect();
        for u in &orbit_span {
            let coef = dot(&v, u) / dot(u, u);
            for (x, y) in v.iter_mut().zip(u) {
                *x -= &coef * y;
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            orbit_span.push(v);
        }
    }
    let orbit_basis = orbit_span
        .iter()
        .map(|v| {
            let f: Vec<f64> = v.iter().map(to_f64).collect();
            let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
            f.into_iter().map(|x| x / norm).collect()
        })
        .collect();
    Ok(CommutantOrbit { generator_matrix: a.clone(), commutant_basis, orbit_span, orbit_basis })
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

fn to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(if q.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// The structure forced on the commutant of [`MATRIX_A`].
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub orbit_dimension: usize,
    pub commutant_dimension: usize,
    /// `B_{0j} = 0` for `j ∉ {0, 1, 3, 5}`.
    pub first_row_pattern: bool,
    /// `B_{2j} = 0` for `j ∈ {0, 1, 3, 5}`.
    pub third_row_zeros: bool,
    /// Every orbit vector has exactly zero `e_2` coordinate.
    pub e2_coordinate_zero: bool,
    /// The `e_2` coordinate as printed: exactly `"0"` when it vanishes.
    pub e2_coordinate: String,
}

impl CounterexampleReport {
    pub fn holds(&self) -> bool {
        self.first_row_pattern && self.third_row_zeros && self.e2_coordinate_zero
    }
}

pub fn counterexample() -> Result<CounterexampleReport> {
    let a = gapped_pair_matrix();
    let dense = a.to_dense_i64();
    if dense.iter().zip(MATRIX_A.iter()).any(|(r, s)| r.as_slice() != s) {
        return Err(Error::Structure("S_{1,3} does not reproduce the 8×8 matrix".into()));
    }
    let orbit = commutant_orbit(&rational_matrix(&a))?;
    let support = [0usize, 1, 3, 5];
    let first_row_pattern = (0..8).filter(|j| !support.contains(j)).all(|j| orbit.entry_vanishes(0, j));
    let third_row_zeros = support.iter().all(|&j| orbit.entry_vanishes(2, j));
    let e2_coordinate_zero = orbit.coordinate_vanishes(2);
    let e2 = orbit
        .orbit_span
        .iter()
        .map(|v| v[2].clone())
        .find(|x| !x.is_zero())
        .unwrap_or_else(BigRational::zero);
    Ok(CounterexampleReport {
        orbit_dimension: orbit.orbit_dimension(),
        commutant_dimension: orbit.commutant_basis.len(),
        first_row_pattern,
        third_row_zeros,
        e2_coordinate_zero,
        e2_coordinate: e2.to_string(),
    })
}
