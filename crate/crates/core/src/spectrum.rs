//! Maass spectral-parameter tables and spectral exponential sums.
//!
//! Eigenvalues are ingested, never computed. A table lists the positive
//! spectral parameters `t_j` (eigenvalue `1/4 + t_j²`) in nondecreasing
//! order, multiplicities written out explicitly. The only validation beyond
//! the file format is the Weyl-law diagnostic
//! `(N(T) − T²/12)/(T·log T)`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fs;
use std::path::Path;

/// Sorted positive Maass spectral parameters with provenance metadata.
#[derive(Clone, Debug)]
pub struct SpectralTable {
    params: Vec<f64>,
    source: String,
}

impl SpectralTable {
    /// Builds a table from in-memory values (positive, nondecreasing).
    pub fn from_params(params: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        for (i, &v) in params.iter().enumerate() {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "spectral parameter {i} must be positive, got {v}"
                )));
            }
            if i > 0 && v < params[i - 1] {
                return Err(Error::InvalidArgument(format!(
                    "spectral parameters must be nondecreasing (index {i})"
                )));
            }
        }
        Ok(Self {
            params,
            source: source.into(),
        })
    }

    /// Parses the text format: leading `#` lines form the source block, each
    /// remaining non-blank line is one positive decimal parameter, and the
    /// sequence must be nondecreasing with first entry above 1.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::SpectrumFile {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
        let err = |line: usize, message: String| Error::SpectrumFile {
            path: path.display().to_string(),
            line,
            message,
        };
        let mut source_lines = Vec::new();
        let mut in_header = true;
        let mut params = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if in_header {
                    source_lines.push(comment.trim().to_string());
                }
                continue;
            }
            in_header = false;
            let v: f64 = line
                .parse()
                .map_err(|_| err(lineno, format!("malformed value {line:?}")))?;
            if !v.is_finite() || v <= 0.0 {
                return Err(err(lineno, format!("non-positive value {v}")));
            }
            if let Some(&prev) = params.last() {
                if v < prev {
                    return Err(err(lineno, format!("not nondecreasing at line {lineno}")));
                }
            } else if v <= 1.0 {
                return Err(err(
                    lineno,
                    format!("first spectral parameter must exceed 1, got {v}"),
                ));
            }
            params.push(v);
        }
        Ok(Self {
            params,
            source: source_lines.join("\n"),
        })
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// Largest listed parameter, 0 for an empty table.
    pub fn t_max(&self) -> f64 {
        self.params.last().copied().unwrap_or(0.0)
    }

    /// `N(T) = #{j : t_j <= T}` (inclusive cutoff, binary search).
    pub fn count_up_to(&self, t: f64) -> usize {
        self.params.partition_point(|&v| v <= t)
    }
}

/// Loads a table from the text format (see [`SpectralTable::load`]).
pub fn load_spectrum(path: impl AsRef<Path>) -> Result<SpectralTable> {
    SpectralTable::load(path)
}

/// Parameters of the standard test function: `β = log X / 2 + i/(2T)`.
#[derive(Clone, Copy, Debug)]
pub struct TestFunctionParams {
    pub x: f64,
    pub t_smooth: f64,
    pub beta: Complex64,
}

impl TestFunctionParams {
    pub fn new(x: f64, t_smooth: f64) -> Result<Self> {
        if !(x > 2.0) || !(t_smooth > 2.0) {
            return Err(Error::InvalidArgument(format!(
                "test function requires X > 2 and T > 2, got X = {x}, T = {t_smooth}"
            )));
        }
        Ok(Self {
            x,
            t_smooth,
            beta: Complex64::new(x.ln() / 2.0, 1.0 / (2.0 * t_smooth)),
        })
    }
}

/// Weyl-law residual `(N(T) − T²/12)/(T·log T)`.
pub fn weyl_residual(table: &SpectralTable, t: f64) -> Result<f64> {
    if !(t > 2.0) {
        return Err(Error::InvalidArgument(format!(
            "weyl_residual requires T > 2, got {t}"
        )));
    }
    if t > table.t_max() {
        return Err(Error::TableTruncated {
            t,
            t_max: table.t_max(),
        });
    }
    let n = table.count_up_to(t) as f64;
    Ok((n - t * t / 12.0) / (t * t.ln()))
}

/// Spectral exponential sum `R(X,T) = Σ_{t_j <= T} X^{i t_j}`.
///
/// The sum always covers every listed parameter up to `T`, so it is never a
/// silent partial sum over the table; whether the table itself covers the
/// spectrum up to `T` is the caller's concern (`t_max` is public, and the
/// CLI warns when `T` exceeds it).
pub fn r_sum(x: f64, t: f64, table: &SpectralTable) -> Result<Complex64> {
    if !(x > 2.0) || !(t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "r_sum requires X > 2 and T > 0, got X = {x}, T = {t}"
        )));
    }
    let lx = x.ln();
    let n = table.count_up_to(t);
    let mut sum = Complex64::new(0.0, 0.0);
    for &tj in &table.params()[..n] {
        sum += Complex64::from_polar(1.0, tj * lx);
    }
    Ok(sum)
}

/// Smoothed spectral sum `Σ_j X^{i t_j} e^{−t_j/T}` over the whole table.
///
/// Requires `t_max >= 15 T` so the dropped tail is below `3·10⁻⁷`.
pub fn s_smooth(x: f64, t: f64, table: &SpectralTable) -> Result<Complex64> {
    if !(x > 2.0) || !(t > 2.0) {
        return Err(Error::InvalidArgument(format!(
            "s_smooth requires X > 2 and T > 2, got X = {x}, T = {t}"
        )));
    }
    if table.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if table.t_max() < 15.0 * t {
        return Err(Error::TailTruncation {
            required: 15.0 * t,
            t_max: table.t_max(),
        });
    }
    let lx = x.ln();
    let mut sum = Complex64::new(0.0, 0.0);
    for &tj in table.params() {
        sum += Complex64::from_polar((-tj / t).exp(), tj * lx);
    }
    Ok(sum)
}

/// Bessel transform of the test function,
/// `φ̂(t) = sinh(πt + 2βit)/sinh(πt) = X^{it} e^{−t/T} + O(e^{−πt})`.
///
/// Evaluated through the factored form
/// `X^{it}·e^{−t/T}·(1 − e^{−2w})/(1 − e^{−2πt})` with
/// `w = πt + i·t·log X − t/T`; raw sinh of large arguments never appears.
pub fn phi_hat(t: f64, p: &TestFunctionParams) -> Complex64 {
    debug_assert!(t > 0.0);
    let lx = p.x.ln();
    let main = Complex64::from_polar((-t / p.t_smooth).exp(), t * lx);
    // e^{−2w} = e^{−2πt + 2t/T} · e^{−2it·logX}
    let decay = (-2.0 * std::f64::consts::PI * t + 2.0 * t / p.t_smooth).exp();
    let e2w = Complex64::from_polar(decay, -2.0 * t * lx);
    let denom = 1.0 - (-2.0 * std::f64::consts::PI * t).exp();
    main * (Complex64::new(1.0, 0.0) - e2w) / denom
}
