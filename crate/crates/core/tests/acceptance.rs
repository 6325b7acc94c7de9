//! Acceptance criteria, one line per criterion.
//!
//! Runs sequentially (no test harness) so the wall-clock limits are measured
//! without interference. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use monofock::binomial;
use monofock::fock::{identities, invariant_subspace_matrix, FockSpace, IndexSet, TruncationSpec};
use monofock::poly::{self, interlacing_check, measure_from_polys, mgf_pair, series_of, structure_check, IntPoly};
use monofock::precision::{self, Real};
use monofock::report::gapped_sets;
use monofock::spectral::{self, commutant, EIGEN_TOLERANCE};
use monofock::{Error, Result};

/// Kolmogorov distances of `μ_n(√n ·)` to the arcsine law, from an
/// independent double-precision recomputation of the atom recursion.
const KS_GOLDEN: [(usize, f64); 4] = [
    (4, 0.155_892_959_422_288_1),
    (8, 0.119_457_958_065_882_77),
    (16, 0.090_508_266_596_442_73),
    (20, 0.082_621_470_005_583_4),
];

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok, detail: detail.into() })
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Result<Outcome>,
}

fn f(x: &Real) -> f64 {
    precision::to_f64(x)
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn bernoulli_base_case() -> Result<Outcome> {
    let law = binomial::binomial_measure(1)?;
    let atoms: Vec<BigRational> = law.measure.atoms().iter().map(precision::to_rational).collect();
    let weights: Vec<BigRational> = law.measure.weights().iter().map(precision::to_rational).collect();
    let half = BigRational::new(1.into(), 2.into());
    let ok = atoms == [-BigRational::one(), BigRational::one()] && weights == [half.clone(), half];
    outcome(ok, format!("atoms {:?}, weights {:?}", law.measure.atoms_f64(), law.measure.weights_f64()))
}

fn golden_ratio_case() -> Result<Outcome> {
    let law = binomial::binomial_measure(2)?;
    let p2 = IntPoly::from_i64(&[1, 0, -3, 0, 1]);
    let p = mgf_pair(2)?.denominator;
    let mut reciprocals: Vec<f64> =
        poly::sturm_isolate(&p)?.iter().map(|ri| 1.0 / f(&poly::refine_root(ri, 128))).collect();
    reciprocals.sort_by(f64::total_cmp);
    let s5 = 5f64.sqrt();
    let closed = [-(s5 + 1.0) / 2.0, -(s5 - 1.0) / 2.0, (s5 - 1.0) / 2.0, (s5 + 1.0) / 2.0];
    let dec = spectral::eigen_decompose(&invariant_subspace_matrix(&IndexSet::contiguous(2)?)?, EIGEN_TOLERANCE)?;
    let atoms = law.measure.atoms_f64();
    let d_roots = max_dev(atoms, &reciprocals);
    let d_closed = max_dev(atoms, &closed);
    let d_weights = max_dev(law.measure.weights_f64(), &dec.vacuum_weights);
    let ok = p == p2 && d_roots < 1e-12 && d_closed < 1e-12 && d_weights < 1e-12;
    outcome(ok, format!("atom dev {d_roots:.1e} (roots), {d_closed:.1e} (closed form); weight dev {d_weights:.1e}"))
}

fn triple_route() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        let law = binomial::binomial_measure(n)?;
        let polys = measure_from_polys(n, 128)?;
        let dec = spectral::eigen_decompose(&invariant_subspace_matrix(&IndexSet::contiguous(n as u32)?)?, EIGEN_TOLERANCE)?;
        if law.measure.len() != 1 << n {
            return outcome(false, format!("n = {n}: {} atoms", law.measure.len()));
        }
        let a = law.measure.atoms_f64();
        let w = law.measure.weights_f64();
        worst = worst
            .max(max_dev(a, polys.atoms_f64()))
            .max(max_dev(w, polys.weights_f64()))
            .max(max_dev(a, &dec.eigenvalues))
            .max(max_dev(w, &dec.vacuum_weights));
    }
    outcome(worst < 1e-10, format!("max deviation {worst:.2e} over n = 1..6"))
}

fn exact_moments() -> Result<Outcome> {
    for n in 1..=6 {
        let oracle = spectral::moment_oracle_sequence(n, 16)?;
        let series = series_of(&mgf_pair(n)?, 16)?;
        if series.integer_coefficients().as_deref() != Some(&oracle[..]) {
            return outcome(false, format!("n = {n}: moments {oracle:?} vs series {:?}", series.coefficients()));
        }
    }
    let m2 = spectral::moment_oracle(2, 2)?;
    let m4 = spectral::moment_oracle(2, 4)?;
    let ok = m2 == BigInt::from(2) && m4 == BigInt::from(5);
    outcome(ok, format!("n <= 6, k <= 16 equal; m2(mu_2) = {m2}, m4(mu_2) = {m4}"))
}

fn operator_identities() -> Result<Outcome> {
    let space = FockSpace::new(TruncationSpec::new(8, 8)?);
    let checks = identities::check_all(&space)?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.holds()).map(|c| c.name.as_str()).collect();
    let columns: usize = checks.iter().map(|c| c.columns_checked).sum();
    if failed.is_empty() {
        outcome(true, format!("{} families, {columns} column checks", checks.len()))
    } else {
        outcome(false, format!("failed: {}", failed.join("; ")))
    }
}

fn identity_polynomials() -> Result<Outcome> {
    let ints = |n| spectral::identity_polynomial(n).map(|p| p.integer_coefficients());
    let n2 = ints(2)?;
    let n3 = ints(3)?;
    let mut notes = vec![format!("n=2 {n2:?}"), format!("n=3 {n3:?}")];
    let mut ok = n2.as_deref() == Some(&[3, -1][..]) && n3.as_deref() == Some(&[7, -13, 7, -1][..]);
    for n in [4, 5] {
        match spectral::identity_polynomial(n) {
            Ok(p) => notes.push(format!("n={n} {} terms", p.terms())),
            Err(Error::ConjectureBound { bound, minimal, .. }) => {
                ok = false;
                notes.push(format!("n={n} needs {} terms > bound {bound}", minimal.unwrap_or(0)));
            }
            Err(e) => return Err(e),
        }
    }
    outcome(ok, notes.join(", "))
}

fn endpoint_sandwich() -> Result<Outcome> {
    let mut prev = 0.0;
    for n in 1..=20 {
        let top = binomial::max_atom(n, 256);
        let (lo, hi) = binomial::endpoint_bounds(n, 256);
        let ratio = f(&top) / (n as f64).sqrt();
        if !(lo <= top && top < hi) || ratio <= prev || ratio >= std::f64::consts::SQRT_2 {
            return outcome(false, format!("n = {n}: max_atom {} outside [{}, {}) or ratio {ratio}", f(&top), f(&lo), f(&hi)));
        }
        if !binomial::monotonicity_inequality(n, f(&top)) {
            return outcome(false, format!("n = {n}: monotonicity inequality fails"));
        }
        prev = ratio;
    }
    let full = binomial::binomial_measure(20)?;
    let ok = full.measure.len() == 1 << 20 && full.sandwich_holds();
    outcome(ok, format!("n <= 20; full mu_20 has {} atoms, max {:.10}, ratio {prev:.10}", full.measure.len(), f(&full.max_atom)))
}

fn clt_trend() -> Result<Outcome> {
    let mut ds = Vec::new();
    let mut worst: f64 = 0.0;
    for (n, golden) in KS_GOLDEN {
        let d = binomial::clt_row(n)?.ks_distance;
        worst = worst.max((d - golden).abs());
        ds.push(d);
    }
    let decreasing = ds.windows(2).all(|w| w[1] < w[0]);
    outcome(decreasing && worst < 1e-12, format!("{ds:.6?}, golden dev {worst:.1e}"))
}

fn interlacing_structure() -> Result<Outcome> {
    for n in 1..=5 {
        if !interlacing_check(n)? {
            return outcome(false, format!("interlacing fails at n = {n}"));
        }
    }
    for n in 1..=6 {
        if !structure_check(n)? {
            return outcome(false, format!("structure fails at n = {n}"));
        }
        let rf = mgf_pair(n)?;
        if rf.denominator.gcd(&rf.numerator).degree() != Some(0) {
            return outcome(false, format!("gcd(P_{n}, Q_{n}) is not constant"));
        }
    }
    outcome(true, "interlacing n <= 5, structure and coprimality n <= 6")
}

fn counterexample() -> Result<Outcome> {
    let r = spectral::counterexample()?;
    let a = commutant::gapped_pair_matrix();
    let orbit = spectral::commutant_orbit(&commutant::rational_matrix(&a))?;
    let e2_everywhere = orbit.orbit_span.iter().all(|v| v[2].is_zero());
    let ok = r.holds() && r.e2_coordinate == "0" && e2_everywhere;
    outcome(
        ok,
        format!(
            "orbit dim {}, commutant dim {}, e2 coordinate {}, zero pattern {}",
            r.orbit_dimension, r.commutant_dimension, r.e2_coordinate, r.third_row_zeros
        ),
    )
}

fn gapped_norms() -> Result<Outcome> {
    let trunc = TruncationSpec::new(8, 8)?;
    let sets = gapped_sets(8, 2, 4);
    let mut worst: f64 = 0.0;
    for indices in &sets {
        let set = IndexSet::new(indices.clone())?;
        let g = spectral::norm_of_gapped_sum(&set, trunc)?;
        let want = f(&binomial::max_atom(set.len(), 128));
        worst = worst.max((g.norm - want).abs());
        if !g.equals_contiguous {
            return outcome(false, format!("{indices:?}: norm {} vs {want}", g.norm));
        }
    }
    outcome(worst < 1e-9, format!("{} gapped sets, max deviation {worst:.1e}", sets.len()))
}

fn cyclicity_shadow() -> Result<Outcome> {
    for n in 1..=5u32 {
        let a = commutant::rational_matrix(&invariant_subspace_matrix(&IndexSet::contiguous(n)?)?);
        let orbit = spectral::commutant_orbit(&a)?;
        if !orbit.spans_full_space() {
            return outcome(false, format!("n = {n}: orbit dimension {}", orbit.orbit_dimension()));
        }
    }
    let mut min_weight = f64::INFINITY;
    for n in 1..=10u32 {
        let dec = spectral::eigen_decompose(&invariant_subspace_matrix(&IndexSet::contiguous(n)?)?, EIGEN_TOLERANCE)?;
        min_weight = min_weight.min(dec.vacuum_weights.iter().copied().fold(f64::INFINITY, f64::min));
    }
    outcome(min_weight > 0.0, format!("orbits full for n <= 5; min vacuum weight {min_weight:.3e} for n <= 10"))
}

fn main() -> ExitCode {
    let ms = Duration::from_millis;
    let s = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "Bernoulli base case", limit: Some(ms(1)), run: bernoulli_base_case },
        Criterion { id: 2, name: "golden-ratio case", limit: Some(ms(10)), run: golden_ratio_case },
        Criterion { id: 3, name: "triple-route equivalence", limit: Some(s(5)), run: triple_route },
        Criterion { id: 4, name: "exact moments", limit: Some(s(5)), run: exact_moments },
        Criterion { id: 5, name: "operator identities", limit: Some(s(10)), run: operator_identities },
        Criterion { id: 6, name: "identity polynomials", limit: Some(s(30)), run: identity_polynomials },
        Criterion { id: 7, name: "endpoint sandwich and monotonicity", limit: Some(s(60)), run: endpoint_sandwich },
        Criterion { id: 8, name: "CLT trend", limit: None, run: clt_trend },
        Criterion { id: 9, name: "interlacing and structure", limit: Some(s(60)), run: interlacing_structure },
        Criterion { id: 10, name: "counterexample", limit: Some(s(1)), run: counterexample },
        Criterion { id: 11, name: "gapped-sum norm", limit: Some(s(30)), run: gapped_norms },
        Criterion { id: 12, name: "vacuum cyclicity shadow", limit: Some(s(60)), run: cyclicity_shadow },
    ];
    let mut failures = 0;
    for c in criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(o) => (o.ok, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = c.limit.map_or(true, |l| elapsed < l);
        let limit = c.limit.map_or("none".to_string(), |l| format!("{l:?}"));
        let pass = ok && in_time;
        if !pass {
            failures += 1;
        }
        let slow = if in_time { "" } else { " [too slow]" };
        println!(
            "{} {:>2} {:<36} {:>12.3?} (limit {limit}){slow}  {detail}",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed
        );
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
