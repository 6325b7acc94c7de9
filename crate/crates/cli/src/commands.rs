use std::fmt::Write;
use std::str::FromStr;

use monofock::binomial::{self, MAX_BINOMIAL_N};
use monofock::fock::{IndexSet, TruncationSpec};
use monofock::measure::AtomicMeasure;
use monofock::poly::{self, IntPoly};
use monofock::precision::{self, DEFAULT_PRECISION_BITS, MIN_PRECISION_BITS};
use monofock::report::{self, Suite};
use monofock::spectral;
use monofock::{Error, Result};
use serde::Serialize;
use serde_json::{json, Number, Value};

use crate::plot::{self, PlotSpec};
use crate::Format;

/// Largest `n` for stem plots.
pub const MAX_PLOT_N: usize = 12;

const DEFAULT_DIGITS: usize = 10;
const MAX_PRECISION_BITS: usize = 4096;

/// Options shared by every command.
#[derive(Clone, Debug)]
pub struct Settings {
    pub precision_bits: usize,
    pub digits: usize,
    pub format: Option<Format>,
    pub cap_n: usize,
}

impl Settings {
    pub fn new(precision_bits: Option<usize>, format: Option<Format>, cap_n: Option<usize>) -> Result<Self> {
        if let Some(b) = precision_bits {
            if !(MIN_PRECISION_BITS..=MAX_PRECISION_BITS).contains(&b) {
                return Err(Error::InvalidArgument(format!(
                    "precision bits must be in {MIN_PRECISION_BITS}..={MAX_PRECISION_BITS}, got {b}"
                )));
            }
        }
        let bits = precision_bits.unwrap_or(DEFAULT_PRECISION_BITS);
        // log10(2) ≈ 0.30103
        let digits = precision_bits.map_or(DEFAULT_DIGITS, |b| (b * 30103 / 100000).max(DEFAULT_DIGITS));
        Ok(Settings { precision_bits: bits, digits, format, cap_n: cap_n.unwrap_or(MAX_BINOMIAL_N) })
    }

    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(Error::InvalidArgument(format!("format {f:?} is not available for this command")))
        }
    }

    fn decimal(&self, x: &precision::Real) -> String {
        precision::to_decimal_string(x, self.digits)
    }

    fn number(&self, x: &precision::Real) -> Value {
        json_number(&self.decimal(x))
    }

    fn number_f64(&self, x: f64) -> Value {
        json_number(&precision::to_decimal_string(&precision::from_f64(x, 64), self.digits.min(17)))
    }
}

fn json_number(s: &str) -> Value {
    Value::Number(Number::from_str(s).expect("decimal strings are valid JSON numbers"))
}

/// Rendered command output; `ok == false` maps to exit code 1.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn require_positive(name: &str, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument(format!("{name} must be at least 1")));
    }
    Ok(())
}

fn measure_json(settings: &Settings, mu: &AtomicMeasure) -> Value {
    json!({
        "atoms": mu.atoms().iter().map(|a| settings.number(a)).collect::<Vec<_>>(),
        "weights": mu.weights().iter().map(|w| settings.number(w)).collect::<Vec<_>>(),
        "precision_bits": mu.precision_bits(),
        "label": mu.label(),
    })
}

pub fn distribution(settings: &Settings, n: usize) -> Result<Output> {
    require_positive("n", n)?;
    let format = settings.format(Format::Json, &[Format::Json, Format::Csv])?;
    let law = binomial::binomial_measure_with(n, settings.precision_bits, settings.cap_n)?;
    let text = match format {
        Format::Csv => law.measure.to_csv(settings.digits),
        _ => to_json(&measure_json(settings, &law.measure)),
    };
    Ok(Output::ok(text))
}

pub fn verify(settings: &Settings, suite: Suite) -> Result<Output> {
    settings.format(Format::Json, &[Format::Json])?;
    let report = report::run_suite(suite);
    Ok(Output { text: to_json(&report), ok: report.is_success() })
}

pub fn plot(settings: &Settings, n: usize, width: u32, height: u32) -> Result<Output> {
    require_positive("n", n)?;
    settings.format(Format::Svg, &[Format::Svg])?;
    let spec = PlotSpec::new(n, width, height)?;
    let law = binomial::binomial_measure_with(n, settings.precision_bits, MAX_PLOT_N)?;
    Ok(Output::ok(plot::stem_plot(&spec, law.measure.atoms_f64(), law.measure.weights_f64())))
}

pub fn clt(settings: &Settings, max_n: usize) -> Result<Output> {
    require_positive("max-n", max_n)?;
    let format = settings.format(Format::Csv, &[Format::Csv, Format::Json])?;
    let rows = binomial::clt_table_with_cap(max_n, settings.cap_n)?;
    let increasing = rows.windows(2).all(|w| w[1].ratio > w[0].ratio);
    let bounded = rows.iter().all(|r| r.ratio < std::f64::consts::SQRT_2);
    let text = match format {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "max_atom": settings.number_f64(r.max_atom),
                        "ratio": settings.number_f64(r.ratio),
                        "ks_distance": settings.number_f64(r.ks_distance),
                    })
                })
                .collect();
            to_json(&rows)
        }
        _ => {
            let mut s = String::from("n,max_atom,ratio,ks_distance\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    r.n,
                    settings.number_f64(r.max_atom),
                    settings.number_f64(r.ratio),
                    settings.number_f64(r.ks_distance)
                );
            }
            s
        }
    };
    Ok(Output { text, ok: increasing && bounded })
}

pub fn norm(settings: &Settings, indices: Vec<u32>, max_level: Option<u32>) -> Result<Output> {
    settings.format(Format::Json, &[Format::Json])?;
    let set = IndexSet::new(indices)?;
    let trunc = TruncationSpec::new(set.max(), max_level.unwrap_or(set.max()))?;
    let g = spectral::norm_of_gapped_sum(&set, trunc)?;
    let out = json!({
        "indices": g.indices,
        "norm": settings.number_f64(g.norm),
        "equals_contiguous": g.equals_contiguous,
    });
    Ok(Output { text: to_json(&out), ok: g.equals_contiguous })
}

fn poly_json(settings: &Settings, p: &IntPoly, exact: bool) -> Value {
    if exact {
        return json!(p.dump());
    }
    let coefficients: Vec<Value> = p
        .coeffs()
        .iter()
        .map(|c| settings.number(&precision::from_rational(&c.clone().into(), settings.precision_bits)))
        .collect();
    json!({ "degree": p.degree(), "coefficients": coefficients })
}

pub fn polys(settings: &Settings, m: usize, exact: bool) -> Result<Output> {
    require_positive("m", m)?;
    settings.format(Format::Json, &[Format::Json])?;
    let rf = poly::mgf_pair(m)?;
    let out = json!({
        "m": m,
        "Q": poly_json(settings, &rf.numerator, exact),
        "P": poly_json(settings, &rf.denominator, exact),
    });
    Ok(Output::ok(to_json(&out)))
}

pub fn counterexample(settings: &Settings) -> Result<Output> {
    let format = settings.format(Format::Text, &[Format::Text, Format::Json])?;
    let r = spectral::counterexample()?;
    let text = match format {
        Format::Json => to_json(&r),
        _ => format!("orbit_dimension {}\ne2_coordinate {}\n", r.orbit_dimension, r.e2_coordinate),
    };
    Ok(Output { text, ok: r.holds() })
}
