//! Truncated explicit formula for `Ψ(X)` and its Abel-summation identity.
//!
//! `Ψ(X) = X + Σ_{|t_j| <= T} X^{1/2+it_j}/(1/2+it_j) + O((X/T)·log²X)` for
//! `2 < T <= X^{1/2}/log²X`; the sum over `±t_j` is twice the real part of
//! the sum over `t_j <= T`. The validity window is enforced as a hard
//! precondition; the `*_forced` entry point (the CLI's `--force`) bypasses it
//! for exploration, with the report flagged.

use crate::arithmetic::{psi, PsiStep};
use crate::error::{Error, Result};
use crate::exec::Kahan;
use crate::spectrum::SpectralTable;
use num_complex::Complex64;

/// One explicit-formula evaluation. `bound` is the error-term shape
/// `(X/T)·log²X` with natural logs; `forced` marks reports produced outside
/// the validity window.
#[derive(Clone, Debug)]
pub struct ExplicitReport {
    pub x: f64,
    pub t: f64,
    pub psi_exact: f64,
    pub psi_spectral: f64,
    pub residual: f64,
    pub bound: f64,
    pub forced: bool,
}

/// Upper end of the validity window, `X^{1/2}/log²X`.
pub fn validity_upper(x: f64) -> f64 {
    x.sqrt() / x.ln().powi(2)
}

fn spectral_sum(x: f64, t: f64, table: &SpectralTable) -> Result<f64> {
    if !(x > 2.0) {
        return Err(Error::InvalidArgument(format!(
            "psi_spectral requires X > 2, got {x}"
        )));
    }
    if t > table.t_max() && !table.is_empty() {
        return Err(Error::TableTruncated {
            t,
            t_max: table.t_max(),
        });
    }
    let lx = x.ln();
    let sqrt_x = x.sqrt();
    let n = table.count_up_to(t);
    let mut re = Kahan::default();
    for &tj in &table.params()[..n] {
        let term = Complex64::from_polar(sqrt_x, tj * lx) / Complex64::new(0.5, tj);
        re.add(term.re);
    }
    Ok(x + 2.0 * re.total())
}

/// `X + 2·Re Σ_{t_j <= T} X^{1/2+it_j}/(1/2+it_j)`, enforcing the validity
/// window `2 < T <= X^{1/2}/log²X`.
pub fn psi_spectral(x: f64, t: f64, table: &SpectralTable) -> Result<f64> {
    let upper = validity_upper(x);
    if !(t > 2.0) || t > upper {
        return Err(Error::ExplicitRange { t, upper });
    }
    spectral_sum(x, t, table)
}

/// Same sum without the validity-window check (`T > 0` still required); the
/// exploration path behind the CLI's `--force`.
pub fn psi_spectral_forced(x: f64, t: f64, table: &SpectralTable) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "psi_spectral requires T > 0, got {t}"
        )));
    }
    spectral_sum(x, t, table)
}

/// Evaluates exact `Ψ` against the truncated spectral expansion.
pub fn explicit_report(
    x: f64,
    t: f64,
    spectrum: &PsiStep,
    table: &SpectralTable,
    force: bool,
) -> Result<ExplicitReport> {
    let psi_exact = psi(x, spectrum)?;
    let upper = validity_upper(x);
    let in_range = t > 2.0 && t <= upper;
    if !in_range && !force {
        return Err(Error::ExplicitRange { t, upper });
    }
    let psi_spec = psi_spectral_forced(x, t, table)?;
    Ok(ExplicitReport {
        x,
        t,
        psi_exact,
        psi_spectral: psi_spec,
        residual: psi_exact - psi_spec,
        bound: (x / t) * x.ln().powi(2),
        forced: !in_range,
    })
}

/// Checks the partial-summation identity
/// `Σ_{t_j<=T} X^{1/2+it_j}/(1/2+it_j)
///   = X^{1/2}·R(X,T)/(1/2+iT) + i·X^{1/2}·∫_1^T R(X,U)/(1/2+iU)² dU`
/// with the `U`-integral computed exactly piecewise (`R(X,·)` is a step
/// function with jumps at the `t_j`; `∫ dU/(1/2+iU)²` has antiderivative
/// `i/(1/2+iU)` per piece). Returns `|LHS − RHS|/(|LHS| + 1e−30)`.
///
/// The identity is over the listed spectrum, so `T` past the end of the
/// table is fine (both sides just stop accumulating jumps).
pub fn partial_summation_check(x: f64, t: f64, table: &SpectralTable) -> Result<f64> {
    if !(x > 2.0) || !(t >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "partial_summation_check requires X > 2 and T >= 1, got X = {x}, T = {t}"
        )));
    }
    if table.is_empty() {
        return Ok(0.0);
    }
    if table.params()[0] <= 1.0 {
        return Err(Error::InvalidArgument(
            "partial-summation identity integrates from U = 1 and requires t_1 > 1".into(),
        ));
    }
    let lx = x.ln();
    let sqrt_x = x.sqrt();
    let n = table.count_up_to(t);

    // LHS: direct sum
    let (mut lhs_re, mut lhs_im) = (Kahan::default(), Kahan::default());
    for &tj in &table.params()[..n] {
        let term = Complex64::from_polar(sqrt_x, tj * lx) / Complex64::new(0.5, tj);
        lhs_re.add(term.re);
        lhs_im.add(term.im);
    }
    let lhs = Complex64::new(lhs_re.total(), lhs_im.total());

    // RHS: boundary term + exact piecewise U-integral. On a piece where
    // R(X,U) is the constant value after j jumps, the integral contributes
    // R · [i/(1/2+iU)] evaluated at the piece ends.
    let phases: Vec<Complex64> = table.params()[..n]
        .iter()
        .map(|&tj| Complex64::from_polar(1.0, tj * lx))
        .collect();
    let anti = |u: f64| Complex64::new(0.0, 1.0) / Complex64::new(0.5, u);
    let mut running = Complex64::new(0.0, 0.0);
    let (mut int_re, mut int_im) = (Kahan::default(), Kahan::default());
    let mut u_prev = 1.0f64;
    for (j, &tj) in table.params()[..n].iter().enumerate() {
        if tj > u_prev {
            let seg = running * (anti(tj) - anti(u_prev));
            int_re.add(seg.re);
            int_im.add(seg.im);
            u_prev = tj;
        }
        running += phases[j];
    }
    if t > u_prev {
        let seg = running * (anti(t) - anti(u_prev));
        int_re.add(seg.re);
        int_im.add(seg.im);
    }
    let integral = Complex64::new(int_re.total(), int_im.total());
    let r_at_t = running; // R(X,T): all t_j <= T accumulated
    let rhs = sqrt_x * r_at_t / Complex64::new(0.5, t)
        + Complex64::new(0.0, sqrt_x) * integral;

    Ok((lhs - rhs).norm() / (lhs.norm() + 1e-30))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::length_spectrum;

    fn table(values: &[f64]) -> SpectralTable {
        SpectralTable::from_params(values.to_vec(), "test").unwrap()
    }

    #[test]
    fn empty_table_gives_main_term() {
        let empty = table(&[]);
        // validity window nonempty only for large X: X = 1e5 gives upper ≈ 2.39
        let v = psi_spectral(1.0e5, 2.2, &empty).unwrap();
        assert_eq!(v, 1.0e5);
        let v = psi_spectral_forced(50.0, 10.0, &empty).unwrap();
        assert_eq!(v, 50.0);
    }

    #[test]
    fn one_term_formula() {
        let t = table(&[3.0]);
        let x = 500.0;
        let v = psi_spectral_forced(x, 3.0, &t).unwrap();
        let term = Complex64::from_polar(x.sqrt(), 3.0 * x.ln()) / Complex64::new(0.5, 3.0);
        assert!((v - (x + 2.0 * term.re)).abs() < 1e-10);
        // T beyond the table is a truncation error for the explicit formula
        assert!(matches!(
            psi_spectral_forced(x, 5.0, &t),
            Err(Error::TableTruncated { .. })
        ));
    }

    #[test]
    fn validity_window_is_enforced() {
        let t = table(&[3.0]);
        // X = 1000: upper = sqrt(1000)/ln²1000 ≈ 0.66 < 2 ⇒ window empty
        assert!(matches!(
            psi_spectral(1000.0, 2.5, &t),
            Err(Error::ExplicitRange { .. })
        ));
        // large X: window open up to ≈ 2.39 at X = 1e5
        assert!(psi_spectral(1.0e5, 2.3, &t).is_ok());
        assert!(matches!(
            psi_spectral(1.0e5, 2.5, &t),
            Err(Error::ExplicitRange { .. })
        ));
    }

    #[test]
    fn report_flags_forced_runs() {
        let spec = length_spectrum(1100.0).unwrap();
        let tab = table(&[9.5, 12.2]);
        let r = explicit_report(1000.0, 10.0, &spec, &tab, true).unwrap();
        assert!(r.forced);
        assert_eq!(r.residual, r.psi_exact - r.psi_spectral);
        assert!((r.bound - (1000.0 / 10.0) * 1000f64.ln().powi(2)).abs() < 1e-9);
        assert!(explicit_report(1000.0, 10.0, &spec, &tab, false).is_err());
    }

    #[test]
    fn partial_summation_trivial_cases() {
        let empty = table(&[]);
        assert_eq!(partial_summation_check(100.0, 5.0, &empty).unwrap(), 0.0);

        // single jump, T > t: telescoping of the antiderivative
        let t = table(&[4.0]);
        let d = partial_summation_check(100.0, 7.0, &t).unwrap();
        assert!(d <= 1e-10, "discrepancy {d}");
        // T below the single entry: both sides are boundary-only
        let d = partial_summation_check(100.0, 2.0, &t).unwrap();
        assert!(d <= 1e-10, "discrepancy {d}");
    }

    #[test]
    fn partial_summation_requires_t1_above_one() {
        let t = table(&[0.5, 4.0]);
        assert!(partial_summation_check(100.0, 5.0, &t).is_err());
    }

    #[test]
    fn partial_summation_small_table() {
        let t = table(&[2.5, 3.0, 4.5, 7.25, 11.0]);
        for &(x, tt) in &[(10.0, 5.0), (1234.5, 9.0), (9.9e5, 11.0), (77.0, 2.6)] {
            let d = partial_summation_check(x, tt, &t).unwrap();
            assert!(d <= 1e-12, "X = {x}, T = {tt}: discrepancy {d}");
        }
    }
}
