//! Exact operator identities of the monotone creation/annihilation algebra,
//! checked column by column on safe basis vectors.

use std::collections::BTreeMap;

use super::{apply_word, FockSpace, IndexSet, SparseOperator};
use crate::error::Result;

/// Outcome of checking one family of identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub columns_checked: usize,
    pub violations: usize,
    pub max_deviation: i64,
}

impl IdentityCheck {
    fn new(name: impl Into<String>) -> Self {
        IdentityCheck { name: name.into(), columns_checked: 0, violations: 0, max_deviation: 0 }
    }

    pub fn holds(&self) -> bool {
        self.violations == 0 && self.columns_checked > 0
    }

    fn record(&mut self, lhs: BTreeMap<usize, i64>, rhs: BTreeMap<usize, i64>) {
        let mut diff = lhs;
        for (k, c) in rhs {
            *diff.entry(k).or_insert(0) -= c;
        }
        let dev = diff.values().map(|c| c.abs()).max().unwrap_or(0);
        self.columns_checked += 1;
        if dev != 0 {
            self.violations += 1;
            self.max_deviation = self.max_deviation.max(dev);
        }
    }
}

fn sum_vectors(parts: impl IntoIterator<Item = BTreeMap<usize, i64>>) -> BTreeMap<usize, i64> {
    let mut out = BTreeMap::new();
    for part in parts {
        for (k, c) in part {
            *out.entry(k).or_insert(0) += c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn unit(j: usize) -> BTreeMap<usize, i64> {
    BTreeMap::from([(j, 1)])
}

struct Ladder {
    a: Vec<SparseOperator>,
    ad: Vec<SparseOperator>,
    s: Vec<SparseOperator>,
}

impl Ladder {
    fn new(space: &FockSpace) -> Result<Self> {
        let n = space.truncation().max_index;
        let mut ladder = Ladder { a: Vec::new(), ad: Vec::new(), s: Vec::new() };
        for i in 1..=n {
            ladder.a.push(space.annihilation(i)?);
            ladder.ad.push(space.creation(i)?);
            ladder.s.push(space.position(i)?);
        }
        Ok(ladder)
    }
}

fn safe_columns(space: &FockSpace, depth: usize) -> Vec<usize> {
    let t = space.truncation();
    space
        .basis()
        .vectors()
        .iter()
        .enumerate()
        .filter(|(_, v)| t.is_safe(v, depth))
        .map(|(j, _)| j)
        .collect()
}

/// `a†_i a†_j = a_j a_i = 0` for `i ≥ j`.
pub fn check_ordering_relations(space: &FockSpace) -> Result<IdentityCheck> {
    let ladder = Ladder::new(space)?;
    let mut check = IdentityCheck::new("a†_i a†_j = a_j a_i = 0 (i ≥ j)");
    let n = ladder.a.len();
    for j in safe_columns(space, 2) {
        for i in 0..n {
            for k in 0..=i {
                check.record(apply_word(&[&ladder.ad[i], &ladder.ad[k]], j), BTreeMap::new());
                check.record(apply_word(&[&ladder.a[k], &ladder.a[i]], j), BTreeMap::new());
            }
        }
    }
    Ok(check)
}

/// `a_i a†_j = 0` for `i ≠ j`, on every basis vector.
pub fn check_mixed_relations(space: &FockSpace) -> Result<IdentityCheck> {
    let ladder = Ladder::new(space)?;
    let mut check = IdentityCheck::new("a_i a†_j = 0 (i ≠ j)");
    let n = ladder.a.len();
    for j in 0..space.dim() {
        for i in 0..n {
            for k in (0..n).filter(|&k| k != i) {
                check.record(apply_word(&[&ladder.a[i], &ladder.ad[k]], j), BTreeMap::new());
            }
        }
    }
    Ok(check)
}

/// `a_i a†_i + Σ_{k ≤ i} a†_k a_k = I`.
pub fn check_resolution_of_identity(space: &FockSpace) -> Result<IdentityCheck> {
    let ladder = Ladder::new(space)?;
    let mut check = IdentityCheck::new("a_i a†_i + Σ_{k≤i} a†_k a_k = I");
    for j in safe_columns(space, 2) {
        for i in 0..ladder.a.len() {
            let lhs = sum_vectors(
                std::iter::once(apply_word(&[&ladder.a[i], &ladder.ad[i]], j)).chain(
                    (0..=i).map(|k| apply_word(&[&ladder.ad[k], &ladder.a[k]], j)),
                ),
            );
            check.record(lhs, unit(j));
        }
    }
    Ok(check)
}

/// `s_i³ = s_i` and `s_i⁴ = s_i²`.
pub fn check_position_powers(space: &FockSpace) -> Result<IdentityCheck> {
    let ladder = Ladder::new(space)?;
    let mut check = IdentityCheck::new("s_i^3 = s_i, s_i^4 = s_i^2");
    for j in safe_columns(space, 4) {
        for s in &ladder.s {
            check.record(apply_word(&[s, s, s], j), apply_word(&[s], j));
            check.record(apply_word(&[s, s, s, s], j), apply_word(&[s, s], j));
        }
    }
    Ok(check)
}

/// `s_i² s_{i+1} = s_{i+1}` and `s_{i+1}² + Σ_{j ≤ i} s_j s_{j+1}² s_j = I`.
pub fn check_neighbour_relations(space: &FockSpace) -> Result<IdentityCheck> {
    let ladder = Ladder::new(space)?;
    let mut check = IdentityCheck::new("s_i^2 s_{i+1} = s_{i+1}, s_{i+1}^2 + Σ s_j s_{j+1}^2 s_j = I");
    let s = &ladder.s;
    for col in safe_columns(space, 4) {
        for i in 0..s.len().saturating_sub(1) {
            check.record(apply_word(&[&s[i], &s[i], &s[i + 1]], col), apply_word(&[&s[i + 1]], col));
            let lhs = sum_vectors(
                std::iter::once(apply_word(&[&s[i + 1], &s[i + 1]], col)).chain(
                    (0..=i).map(|j| apply_word(&[&s[j], &s[j + 1], &s[j + 1], &s[j]], col)),
                ),
            );
            check.record(lhs, unit(col));
        }
    }
    Ok(check)
}

/// Every column of `a_i, a†_i, b_i, b†_i` has at most one nonzero entry, equal to 1.
pub fn check_partial_isometries(space: &FockSpace) -> Result<IdentityCheck> {
    let mut check = IdentityCheck::new("ladder operator columns have norm ≤ 1");
    for i in 1..=space.truncation().max_index {
        for op in [
            space.annihilation(i)?,
            space.creation(i)?,
            space.right_annihilation(i)?,
            space.right_creation(i)?,
        ] {
            for j in 0..op.dim() {
                let col = op.column(j);
                check.columns_checked += 1;
                let ok = col.len() <= 1 && col.iter().all(|&(_, c)| c == 1);
                if !ok {
                    check.violations += 1;
                    check.max_deviation = check
                        .max_deviation
                        .max(col.iter().map(|&(_, c)| c.abs()).sum());
                }
            }
        }
    }
    Ok(check)
}

/// `[S_n, r_{n+j}] = 0` for `n ≤ max_n`, `j ≤ max_j` with `n + j ≤ N`.
pub fn check_right_commutation(space: &FockSpace, max_n: u32, max_j: u32) -> Result<IdentityCheck> {
    let mut check = IdentityCheck::new("[S_n, r_{n+j}] = 0");
    let t = space.truncation();
    for n in 1..=max_n.min(t.max_index) {
        let sn = space.sum(&IndexSet::contiguous(n)?)?;
        for j in 0..=max_j {
            if n + j > t.max_index {
                continue;
            }
            let r = space.right_position(n + j)?;
            for col in safe_columns(space, 2) {
                check.record(apply_word(&[&sn, &r], col), apply_word(&[&r, &sn], col));
            }
        }
    }
    Ok(check)
}

/// Every `s_i`, `r_i` and `S_{1..n}` is an exactly symmetric integer matrix.
pub fn check_symmetry(space: &FockSpace) -> Result<IdentityCheck> {
    let mut check = IdentityCheck::new("built operators are symmetric");
    for i in 1..=space.truncation().max_index {
        for op in [space.position(i)?, space.right_position(i)?, space.sum(&IndexSet::contiguous(i)?)?] {
            check.columns_checked += op.dim();
            if !op.is_symmetric() {
                check.violations += 1;
                check.max_deviation = check.max_deviation.max(1);
            }
        }
    }
    Ok(check)
}

/// All identity families at once.
pub fn check_all(space: &FockSpace) -> Result<Vec<IdentityCheck>> {
    Ok(vec![
        check_ordering_relations(space)?,
        check_mixed_relations(space)?,
        check_resolution_of_identity(space)?,
        check_position_powers(space)?,
        check_neighbour_relations(space)?,
        check_partial_isometries(space)?,
        check_symmetry(space)?,
        check_right_commutation(space, 4, 3)?,
    ])
}
