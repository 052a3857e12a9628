//! Square-mean error functionals `(1/A)∫_A^{2A} |·|² dX`.
//!
//! Step-function integrands (`Ψ(X) − X` and the short-interval variant) are
//! integrated exactly piece by piece between breakpoints; spectral pair sums
//! use the closed form `(1/A)·Σ_{j,k} ((2A)^{1+iδ} − A^{1+iδ})/(1 + iδ)` with
//! `δ = t_j − t_k`. Envelopes drop the `(AT)^ε` factor and the implied
//! constant, so ratios value/envelope are diagnostics, not absolute checks.

use crate::arithmetic::PsiStep;
use crate::error::{Error, Result};
use crate::exec::{self, Kahan};
use crate::spectrum::SpectralTable;
use num_complex::Complex64;

/// Hard cap on `N(T)` for the O(n²) closed-form pair sums.
pub const PAIR_GUARD: usize = 20_000;

/// Pieces shorter than this fraction of `A` are merged; the two breakpoint
/// families of the short-interval functional can nearly collide.
const MERGE_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functional {
    PsiError,
    RSum,
    SSmooth,
    ShortInterval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    PiecewiseExact,
    Quadrature,
}

/// One evaluated functional value with its parameters and method tag.
#[derive(Clone, Debug)]
pub struct MeanSquareReport {
    pub functional: Functional,
    pub a: f64,
    pub t: Option<f64>,
    pub eta: Option<f64>,
    pub value: f64,
    pub method: Method,
}

/// Least-squares fit of `log value` against `log A`.
#[derive(Clone, Debug)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// the fitted `(log A, log value)` points
    pub points: Vec<(f64, f64)>,
}

fn check_coverage(a: f64, spectrum: &PsiStep) -> Result<()> {
    if !(a > 2.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "mean-square functionals require finite A > 2, got {a}"
        )));
    }
    let need = (2.0 * a).ln();
    if need > spectrum.log_coverage() {
        return Err(Error::SpectrumTruncated {
            x: 2.0 * a,
            coverage: spectrum.log_coverage().exp(),
        });
    }
    Ok(())
}

/// Breakpoint abscissas of `Ψ` inside `(a, 2a)`, as norms.
fn norms_in_window(spectrum: &PsiStep, a: f64) -> Vec<f64> {
    let (lo, hi) = (a.ln(), (2.0 * a).ln());
    spectrum
        .breakpoints()
        .iter()
        .filter(|b| b.log_norm > lo && b.log_norm < hi)
        .map(|b| b.log_norm.exp())
        .collect()
}

/// Merges sorted cut points into integration pieces over `[a, 2a]`,
/// dropping cuts closer than `MERGE_EPS·a` to their predecessor.
fn pieces(a: f64, mut cuts: Vec<f64>) -> Vec<(f64, f64)> {
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let mut ends = vec![a];
    for c in cuts {
        if c - ends.last().unwrap() > MERGE_EPS * a && 2.0 * a - c > MERGE_EPS * a {
            ends.push(c);
        }
    }
    ends.push(2.0 * a);
    ends.windows(2).map(|w| (w[0], w[1])).collect()
}

/// `(1/A)∫_A^{2A} |Ψ(X) − X|² dX`, exact: between breakpoints `Ψ` is a
/// constant `c` and `∫ (c−X)² dX = [(X−c)³/3]`.
pub fn ms_psi_error(a: f64, spectrum: &PsiStep) -> Result<MeanSquareReport> {
    check_coverage(a, spectrum)?;
    let mut total = Kahan::default();
    for (l, r) in pieces(a, norms_in_window(spectrum, a)) {
        let c = spectrum.value_at_log(((l + r) / 2.0).ln());
        total.add(((r - c).powi(3) - (l - c).powi(3)) / 3.0);
    }
    Ok(MeanSquareReport {
        functional: Functional::PsiError,
        a,
        t: None,
        eta: None,
        value: total.total() / a,
        method: Method::PiecewiseExact,
    })
}

/// `(1/A)∫_A^{2A} |Ψ(X) − Ψ(X − ηX) − ηX|² dX`, exact piecewise with the
/// breakpoint families `{N_i}` and `{N_i/(1−η)}`.
///
/// The functional accepts any `η ∈ (0, 1/2)`; the paper's theorem range is
/// enforced only by the sweep driver.
pub fn ms_short_interval(a: f64, eta: f64, spectrum: &PsiStep) -> Result<MeanSquareReport> {
    if !(eta > 0.0 && eta < 0.5) {
        return Err(Error::InvalidArgument(format!(
            "short-interval functional requires eta in (0, 1/2), got {eta}"
        )));
    }
    check_coverage(a, spectrum)?;
    let mut cuts = norms_in_window(spectrum, a);
    let (lo, hi) = (a.ln(), (2.0 * a).ln());
    let shift = -(1.0 - eta).ln();
    cuts.extend(
        spectrum
            .breakpoints()
            .iter()
            .map(|b| b.log_norm + shift)
            .filter(|&ln| ln > lo && ln < hi)
            .map(f64::exp),
    );
    let mut total = Kahan::default();
    for (l, r) in pieces(a, cuts) {
        let mid = (l + r) / 2.0;
        let c = spectrum.value_at_log(mid.ln()) - spectrum.value_at_log((mid * (1.0 - eta)).ln());
        // ∫ (c − ηX)² dX = [−(c − ηX)³/(3η)]
        total.add(((c - eta * l).powi(3) - (c - eta * r).powi(3)) / (3.0 * eta));
    }
    Ok(MeanSquareReport {
        functional: Functional::ShortInterval,
        a,
        t: None,
        eta: Some(eta),
        value: total.total() / a,
        method: Method::PiecewiseExact,
    })
}

/// Closed-form pair sum shared by `ms_r_closed` and `ms_s_smooth`:
/// diagonal terms contribute `w_j²` exactly, off-diagonal pairs contribute
/// `2·Re` of the integrated cross term, so the imaginary part cancels
/// identically.
fn pair_mean_square(a: f64, ts: &[f64], weights: Option<&[f64]>) -> f64 {
    let n = ts.len();
    let ln_a = a.ln();
    let ln_2a = (2.0 * a).ln();
    let z: Vec<Complex64> = ts.iter().map(|&t| Complex64::from_polar(1.0, t * ln_a)).collect();
    let w: Vec<Complex64> = ts.iter().map(|&t| Complex64::from_polar(1.0, t * ln_2a)).collect();
    let partials = exec::map_range(n, |j| {
        let wj = weights.map_or(1.0, |ws| ws[j]);
        let mut acc = 0.0;
        for k in 0..j {
            let wk = weights.map_or(1.0, |ws| ws[k]);
            let delta = ts[j] - ts[k];
            let num = 2.0 * a * w[j] * w[k].conj() - a * z[j] * z[k].conj();
            acc += wj * wk * (num / Complex64::new(1.0, delta)).re;
        }
        acc
    });
    let mut off = Kahan::default();
    for p in partials {
        off.add(p);
    }
    let diag: f64 = match weights {
        Some(ws) => ws.iter().map(|w| w * w).sum(),
        None => n as f64,
    };
    diag + 2.0 * off.total() / a
}

/// `(1/A)∫_A^{2A} |Σ_{t_j <= T} X^{i t_j}|² dX` in closed form.
pub fn ms_r_closed(a: f64, t: f64, table: &SpectralTable) -> Result<MeanSquareReport> {
    if !(a > 2.0) || !(t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ms_r_closed requires A > 2 and T > 0, got A = {a}, T = {t}"
        )));
    }
    let n = table.count_up_to(t);
    if !table.is_empty() && t > table.t_max() {
        return Err(Error::TableTruncated {
            t,
            t_max: table.t_max(),
        });
    }
    if n > PAIR_GUARD {
        return Err(Error::PairGuardExceeded {
            n,
            limit: PAIR_GUARD,
        });
    }
    let value = pair_mean_square(a, &table.params()[..n], None);
    Ok(MeanSquareReport {
        functional: Functional::RSum,
        a,
        t: Some(t),
        eta: None,
        value,
        method: Method::ClosedForm,
    })
}

/// `(1/A)∫_A^{2A} |Σ_j X^{i t_j} e^{−t_j/T}|² dX` in closed form, with pair
/// weights `e^{−(t_j + t_k)/T}`.
pub fn ms_s_smooth(a: f64, t: f64, table: &SpectralTable) -> Result<MeanSquareReport> {
    if !(a > 2.0) || !(t > 2.0) {
        return Err(Error::InvalidArgument(format!(
            "ms_s_smooth requires A > 2 and T > 2, got A = {a}, T = {t}"
        )));
    }
    let report = |value| MeanSquareReport {
        functional: Functional::SSmooth,
        a,
        t: Some(t),
        eta: None,
        value,
        method: Method::ClosedForm,
    };
    if table.is_empty() {
        return Ok(report(0.0));
    }
    if table.t_max() < 15.0 * t {
        return Err(Error::TailTruncation {
            required: 15.0 * t,
            t_max: table.t_max(),
        });
    }
    if table.len() > PAIR_GUARD {
        return Err(Error::PairGuardExceeded {
            n: table.len(),
            limit: PAIR_GUARD,
        });
    }
    let weights: Vec<f64> = table.params().iter().map(|&tj| (-tj / t).exp()).collect();
    let value = pair_mean_square(a, table.params(), Some(&weights));
    Ok(report(value))
}

/// `Σ 1/(1 + |t_j − t_k|)` over ordered pairs with both parameters in
/// `[lo, hi)`. Diagonal pairs count.
pub fn resonance_sum(table: &SpectralTable, lo: f64, hi: f64) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "resonance_sum requires lo < hi, got [{lo}, {hi})"
        )));
    }
    let start = table.params().partition_point(|&v| v < lo);
    let end = table.params().partition_point(|&v| v < hi);
    let window = &table.params()[start..end];
    let partials = exec::map_range(window.len(), |j| {
        let mut acc = 0.0;
        for k in 0..window.len() {
            acc += 1.0 / (1.0 + (window[j] - window[k]).abs());
        }
        acc
    });
    let mut total = Kahan::default();
    for p in partials {
        total.add(p);
    }
    Ok(total.total())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    T1,
    T2,
    T3,
}

/// The power-law bound with the `(AT)^ε` factor and implied constant dropped.
///
/// * `T1 → A^{7/6}`
/// * `T2 → T³` for `T <= A^{1/6}`, `A^{1/4}·T^{3/2}` for `A^{1/6} < T <= A^{1/2}`,
///   `T²` for `T > A^{1/2}` (range joins inclusive-left)
/// * `T3 → A^{5/4}·η^{1/2}`
pub fn envelope(theorem: Theorem, a: f64, t: Option<f64>, eta: Option<f64>) -> Result<f64> {
    if !(a > 2.0) {
        return Err(Error::InvalidArgument(format!(
            "envelope requires A > 2, got {a}"
        )));
    }
    match theorem {
        Theorem::T1 => Ok(a.powf(7.0 / 6.0)),
        Theorem::T2 => {
            let t = t.ok_or(Error::MissingParameter("t"))?;
            Ok(if t <= a.powf(1.0 / 6.0) {
                t.powi(3)
            } else if t <= a.sqrt() {
                a.powf(0.25) * t.powf(1.5)
            } else {
                t * t
            })
        }
        Theorem::T3 => {
            let eta = eta.ok_or(Error::MissingParameter("eta"))?;
            Ok(a.powf(1.25) * eta.sqrt())
        }
    }
}

/// Ordinary least squares of `log value` against `log A`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "exponent fit requires at least 3 points, got {}",
            points.len()
        )));
    }
    let mut logs = Vec::with_capacity(points.len());
    for &(a, v) in points {
        if !(a > 0.0 && v > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "exponent fit requires positive points, got ({a}, {v})"
            )));
        }
        logs.push((a.ln(), v.ln()));
    }
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return Err(Error::InvalidArgument(
            "exponent fit is degenerate: all A equal".into(),
        ));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let ss_res: f64 = logs
        .iter()
        .map(|&(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = logs.iter().map(|&(_, y)| (y - mean_y).powi(2)).sum();
    let r2 = if ss_tot > 1e-30 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(ExponentFit {
        slope,
        intercept,
        r2,
        points: logs,
    })
}

/// Sweep grid: `points` log-spaced values of `A`, optional `T` list (T2) and
/// per-`A` eta grid size (T3).
#[derive(Clone, Debug)]
pub struct SweepGrid {
    pub a_min: f64,
    pub a_max: f64,
    pub points: usize,
    pub t_values: Vec<f64>,
    pub eta_points: usize,
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub theorem: Theorem,
    pub a: f64,
    pub t: Option<f64>,
    pub eta: Option<f64>,
    pub value: f64,
    pub envelope: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug)]
pub struct LabeledFit {
    pub label: String,
    pub fit: ExponentFit,
}

/// Sweep result: rows in grid order, fits over the A-dimension, and the
/// per-row errors (coverage failures are reported, not fatal).
#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub fits: Vec<LabeledFit>,
    pub row_errors: Vec<(usize, String)>,
}

/// `points` log-spaced values in `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 1 && lo > 0.0 && hi >= lo);
    if points == 1 {
        return vec![lo];
    }
    let step = (hi / lo).powf(1.0 / (points - 1) as f64);
    (0..points)
        .map(|i| {
            if i == points - 1 {
                hi
            } else {
                lo * step.powi(i as i32)
            }
        })
        .collect()
}

/// Theorem-3 eta grid: the paper-range rule `A^{−1/2}·log²A <= η < A^{−1/6}`
/// evaluated with decadic logs, intersected with the functional's `(0, 1/2)`
/// domain. With natural logs the window is empty for every `A` below ~2.4e7,
/// so no desk-scale sweep would have rows at all; the decadic reading keeps
/// the window non-empty from `A ≈ 1e3` up. Empty windows yield no rows.
pub fn eta_grid_paper(a: f64, points: usize) -> Vec<f64> {
    let lo = a.log10().powi(2) / a.sqrt();
    let hi = a.powf(-1.0 / 6.0).min(0.5);
    if !(lo < hi) || points == 0 {
        return Vec::new();
    }
    // keep the upper end exclusive
    log_spaced(lo, hi * (1.0 - 1e-9), points)
}

enum RowSpec {
    T1 { a: f64 },
    T2 { a: f64, t: f64 },
    T3 { a: f64, eta: f64 },
}

/// Sweep driver for the three theorem probes. Rows are evaluated
/// data-parallel and emitted in grid order; the ratio column is
/// `value / envelope`.
pub fn sweep(
    theorem: Theorem,
    grid: &SweepGrid,
    spectrum: Option<&PsiStep>,
    table: Option<&SpectralTable>,
) -> Result<SweepOutcome> {
    let a_values = log_spaced(grid.a_min, grid.a_max, grid.points);
    let mut specs = Vec::new();
    match theorem {
        Theorem::T1 => {
            spectrum.ok_or(Error::MissingParameter("spectrum"))?;
            specs.extend(a_values.iter().map(|&a| RowSpec::T1 { a }));
        }
        Theorem::T2 => {
            table.ok_or(Error::MissingParameter("table"))?;
            if grid.t_values.is_empty() {
                return Err(Error::MissingParameter("t"));
            }
            for &t in &grid.t_values {
                specs.extend(a_values.iter().map(move |&a| RowSpec::T2 { a, t }));
            }
        }
        Theorem::T3 => {
            spectrum.ok_or(Error::MissingParameter("spectrum"))?;
            for &a in &a_values {
                specs.extend(
                    eta_grid_paper(a, grid.eta_points)
                        .into_iter()
                        .map(move |eta| RowSpec::T3 { a, eta }),
                );
            }
        }
    }
    let results = exec::map_ordered(&specs, |spec| -> Result<SweepRow> {
        let (a, t, eta, value) = match *spec {
            RowSpec::T1 { a } => (a, None, None, ms_psi_error(a, spectrum.unwrap())?.value),
            RowSpec::T2 { a, t } => (
                a,
                Some(t),
                None,
                ms_r_closed(a, t, table.unwrap())?.value,
            ),
            RowSpec::T3 { a, eta } => (
                a,
                None,
                Some(eta),
                ms_short_interval(a, eta, spectrum.unwrap())?.value,
            ),
        };
        let env = envelope(theorem, a, t, eta)?;
        Ok(SweepRow {
            theorem,
            a,
            t,
            eta,
            value,
            envelope: env,
            ratio: value / env,
        })
    });
    let mut rows = Vec::new();
    let mut row_errors = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => row_errors.push((i, e.to_string())),
        }
    }
    let mut fits = Vec::new();
    let mut push_fit = |label: String, pts: Vec<(f64, f64)>| {
        if pts.len() >= 3 {
            if let Ok(fit) = fit_exponent(&pts) {
                fits.push(LabeledFit { label, fit });
            }
        }
    };
    match theorem {
        Theorem::T1 => {
            let pts: Vec<_> = rows.iter().filter(|r| r.value > 0.0).map(|r| (r.a, r.value)).collect();
            push_fit("psi-error".into(), pts);
        }
        Theorem::T2 => {
            for &t in &grid.t_values {
                let pts: Vec<_> = rows
                    .iter()
                    .filter(|r| r.t == Some(t) && r.value > 0.0)
                    .map(|r| (r.a, r.value))
                    .collect();
                push_fit(format!("T={t}"), pts);
            }
        }
        Theorem::T3 => {
            let pts: Vec<_> = rows.iter().filter(|r| r.value > 0.0).map(|r| (r.a, r.value)).collect();
            push_fit("pooled".into(), pts);
        }
    }
    Ok(SweepOutcome {
        rows,
        fits,
        row_errors,
    })
}
