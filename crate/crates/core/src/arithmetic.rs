//! Exact length spectrum of the modular surface.
//!
//! Hyperbolic conjugacy classes of `PSL(2,Z)` with trace `t >= 3` are in
//! bijection with proper classes of integral binary quadratic forms of
//! discriminant `t² − 4`. Dividing out the content `f` of a form leaves a
//! primitive form of discriminant `D0 = (t² − 4)/f²`, so the classes with
//! trace `t` decompose as one block of `h(D0)` classes per square divisor
//! `f` with `D0 ≡ 0, 1 (mod 4)`. The class in block `(D0, f)` is the `k`-th
//! power of a primitive class whose trace `t0` is the fundamental solution of
//! `t0² − D0·u0² = 4`; its weight is `Λ = 2·log ε0` with
//! `ε0 = (t0 + u0·√D0)/2`, and its norm satisfies `log NP = k·Λ`.
//!
//! Norms are stored and compared in log space throughout (nats); at `X = 1e12`
//! the norms themselves would overflow long before the logs do.

use crate::error::{Error, Result};
use crate::exec;
use std::collections::HashSet;
use std::io::{self, Write};

/// Class data of one primitive discriminant: fundamental Pell solution,
/// narrow class number and the regulator-like weight `log ε0` in nats.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveDiscriminant {
    pub d0: i64,
    pub t0: i64,
    pub u0: i64,
    pub h: u64,
    pub log_eps: f64,
}

/// One block of conjugacy classes with a common trace: `f²·D0 = t² − 4`,
/// `h` classes, each the `k`-th power of a primitive class of length `lambda`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceClassEntry {
    pub d0: i64,
    pub f: i64,
    pub h: u64,
    pub k: u32,
    pub lambda: f64,
}

/// All conjugacy-class data attached to one hyperbolic trace.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceClassData {
    pub trace: i64,
    pub entries: Vec<TraceClassEntry>,
    /// `2·log((t + √(t²−4))/2)`, the common log-norm of every class above.
    pub log_norm: f64,
}

impl TraceClassData {
    /// Total weight `Σ h·Λ` contributed at this trace.
    pub fn jump(&self) -> f64 {
        self.entries.iter().map(|e| e.h as f64 * e.lambda).sum()
    }
}

/// One breakpoint of the step function `X ↦ Ψ(X)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiBreakpoint {
    pub trace: i64,
    pub log_norm: f64,
    pub jump: f64,
}

/// The exact step function `X ↦ Ψ(X)` as sorted log-norm breakpoints with
/// weights and running prefix sums. Immutable after construction.
#[derive(Clone, Debug)]
pub struct PsiStep {
    breakpoints: Vec<PsiBreakpoint>,
    prefix: Vec<f64>,
    log_coverage: f64,
}

impl PsiStep {
    pub fn breakpoints(&self) -> &[PsiBreakpoint] {
        &self.breakpoints
    }

    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    /// `log X` up to which the enumeration is complete.
    pub fn log_coverage(&self) -> f64 {
        self.log_coverage
    }

    /// `Ψ(exp(lx))` by binary search; no coverage check (internal use and
    /// integrators, which validate coverage once per call).
    pub(crate) fn value_at_log(&self, lx: f64) -> f64 {
        let i = self.breakpoints.partition_point(|b| b.log_norm <= lx);
        if i == 0 {
            0.0
        } else {
            self.prefix[i - 1]
        }
    }

    /// Writes the `trace,log_norm,jump` CSV dump, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "trace,log_norm,jump")?;
        for b in &self.breakpoints {
            writeln!(w, "{},{:.16e},{:.16e}", b.trace, b.log_norm, b.jump)?;
        }
        Ok(())
    }
}

/// Largest integer `r` with `r² <= n`.
fn isqrt(n: i64) -> i64 {
    debug_assert!(n >= 0);
    let mut r = (n as f64).sqrt() as i64;
    while r > 0 && r.checked_mul(r).map_or(true, |rr| rr > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |rr| rr <= n) {
        r += 1;
    }
    r
}

fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n);
    r * r == n
}

/// Trial-division factorization; exponents of each prime.
fn factorize(mut n: i64) -> Vec<(i64, u32)> {
    debug_assert!(n >= 1);
    let mut out = Vec::new();
    let mut p = 2i64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn merge_factors(a: Vec<(i64, u32)>, b: Vec<(i64, u32)>) -> Vec<(i64, u32)> {
    let mut out = a;
    for (p, e) in b {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some((_, f)) => *f += e,
            None => out.push((p, e)),
        }
    }
    out.sort_unstable();
    out
}

fn square_divisors_from_factors(factors: &[(i64, u32)]) -> Vec<i64> {
    let mut out = vec![1i64];
    for &(p, e) in factors {
        let reps = e / 2;
        if reps == 0 {
            continue;
        }
        let base = out.clone();
        let mut pk = 1i64;
        for _ in 0..reps {
            pk *= p;
            out.extend(base.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// All positive `f` with `f² | d`, sorted ascending. Always contains 1.
pub fn square_divisors(d: i64) -> Vec<i64> {
    assert!(d >= 1, "square_divisors requires d >= 1");
    square_divisors_from_factors(&factorize(d))
}

/// True iff `d > 0`, `d ≡ 0, 1 (mod 4)`, and `d` is not a perfect square.
pub fn is_discriminant(d: i64) -> bool {
    d > 0 && (d % 4 == 0 || d % 4 == 1) && !is_square(d)
}

/// Primitive reduced forms `(a, b, c)` of discriminant `d0`: `b² − 4ac = d0`,
/// `gcd(a,b,c) = 1` and `|√d0 − 2|a|| < b < √d0`. All comparisons are exact
/// integer tests.
pub fn reduced_forms(d0: i64) -> Result<Vec<(i64, i64, i64)>> {
    if !is_discriminant(d0) {
        return Err(Error::NotADiscriminant(d0));
    }
    let mut out = Vec::new();
    let s = isqrt(d0);
    // b < sqrt(d0) and b ≡ d0 (mod 2); (b² − d0)/4 = a·c < 0.
    let mut b = if d0 % 2 == 0 { 2 } else { 1 };
    while b <= s && b * b < d0 {
        if (b * b - d0).rem_euclid(4) == 0 {
            let m = (b * b - d0) / 4; // negative
            let mabs = -m;
            let mut d = 1i64;
            while d * d <= mabs {
                if mabs % d == 0 {
                    for aa in [d, mabs / d] {
                        for a in [aa, -aa] {
                            let c = m / a;
                            // |√d0 − 2|a|| < b  ⇔  (2|a| − b)² < d0 when
                            // 2|a| > b (else automatic), and d0 < (2|a| + b)².
                            let lo = 2 * a.abs() - b;
                            if lo > 0 && lo * lo >= d0 {
                                continue;
                            }
                            let hi = 2 * a.abs() + b;
                            if hi * hi <= d0 {
                                continue;
                            }
                            if gcd(gcd(a.abs(), b), c.abs()) != 1 {
                                continue;
                            }
                            out.push((a, b, c));
                        }
                    }
                }
                d += 1;
            }
        }
        b += 2;
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Right neighbor in the reduction cycle: `(a,b,c) → (c, r, (r²−d0)/(4c))`
/// with `r ≡ −b (mod 2|c|)` and `√d0 − 2|c| < r < √d0`.
fn neighbor(form: (i64, i64, i64), d0: i64, s: i64) -> (i64, i64, i64) {
    let (_, b, c) = form;
    let m = 2 * c.abs();
    // integer window (√d0 − 2|c|, √d0) = [s + 1 − 2|c|, s] for non-square d0
    let lo = s + 1 - m;
    let r = lo + (-b - lo).rem_euclid(m);
    let cc = (r * r - d0) / (4 * c);
    (c, r, cc)
}

/// Narrow class number: the number of cycles of the reduced forms under the
/// reduction map.
pub fn class_number(d0: i64) -> Result<u64> {
    let forms = reduced_forms(d0)?;
    let set: HashSet<(i64, i64, i64)> = forms.iter().copied().collect();
    let s = isqrt(d0);
    let mut seen: HashSet<(i64, i64, i64)> = HashSet::with_capacity(forms.len());
    let mut cycles = 0u64;
    for &f0 in &forms {
        if seen.contains(&f0) {
            continue;
        }
        cycles += 1;
        let mut g = f0;
        loop {
            seen.insert(g);
            g = neighbor(g, d0, s);
            debug_assert!(set.contains(&g), "neighbor left the reduced set");
            if g == f0 {
                break;
            }
        }
    }
    Ok(cycles)
}

/// Minimal `t0 >= 3` with `(t0² − 4)/d0` a perfect square `u0²`, searched
/// upward to `bound` (the calling trace; the fundamental trace always divides
/// the power chain, so `t0 <= t`).
pub fn pell_fundamental(d0: i64, bound: i64) -> Result<(i64, i64)> {
    if !is_discriminant(d0) {
        return Err(Error::NotADiscriminant(d0));
    }
    let mut t0 = 3i64;
    while t0 <= bound {
        let m = t0
            .checked_mul(t0)
            .and_then(|v| v.checked_sub(4))
            .ok_or(Error::Overflow("pell_fundamental"))?;
        if m % d0 == 0 {
            let q = m / d0;
            let r = isqrt(q);
            if r * r == q {
                return Ok((t0, r));
            }
        }
        t0 += 1;
    }
    Err(Error::PellBoundExceeded { d0, bound })
}

/// Trace of the `k`-th power: `T_1 = t0`, `T_2 = t0² − 2`,
/// `T_{k+1} = t0·T_k − T_{k−1}`. Errors instead of wrapping on overflow.
pub fn trace_power(t0: i64, k: u32) -> Result<i64> {
    assert!(t0 >= 3 && k >= 1, "trace_power requires t0 >= 3, k >= 1");
    let sq = t0.checked_mul(t0).ok_or(Error::Overflow("trace_power"))?;
    let mut pair = (t0, sq - 2); // (T_1, T_2)
    match k {
        1 => return Ok(pair.0),
        2 => return Ok(pair.1),
        _ => {}
    }
    for _ in 2..k {
        let next = t0
            .checked_mul(pair.1)
            .and_then(|v| v.checked_sub(pair.0))
            .ok_or(Error::Overflow("trace_power"))?;
        pair = (pair.1, next);
    }
    Ok(pair.1)
}

const MAX_POWER_INDEX: u32 = 64;

/// `2·log((t + √(t²−4))/2)`, the log-norm of the classes with trace `t`.
pub fn log_norm_of_trace(t: i64) -> f64 {
    let tf = t as f64;
    2.0 * ((tf + (tf * tf - 4.0).sqrt()) / 2.0).ln()
}

/// Full class decomposition at one trace.
pub fn trace_classes(t: i64) -> Result<TraceClassData> {
    assert!(t >= 3, "trace_classes requires t >= 3");
    t.checked_mul(t)
        .and_then(|v| v.checked_sub(4))
        .ok_or(Error::Overflow("trace_classes"))?;
    // factor (t−2)(t+2) separately; each factor stays near t instead of t².
    let factors = merge_factors(factorize(t - 2), factorize(t + 2));
    let disc = (t - 2) * (t + 2);
    let mut entries = Vec::new();
    for f in square_divisors_from_factors(&factors) {
        let d0 = disc / (f * f);
        if !is_discriminant(d0) {
            continue;
        }
        let h = class_number(d0)?;
        // u0·√d0 = √(t0²−4), so ε0 only needs t0
        let (t0, _) = pell_fundamental(d0, t)?;
        let mut k = 0u32;
        for kk in 1..=MAX_POWER_INDEX {
            match trace_power(t0, kk)? {
                v if v == t => {
                    k = kk;
                    break;
                }
                v if v > t => break,
                _ => {}
            }
        }
        if k == 0 {
            return Err(Error::PowerIndexFailure { trace: t, d0 });
        }
        let eps0 = (t0 as f64 + ((t0 * t0 - 4) as f64).sqrt()) / 2.0;
        entries.push(TraceClassEntry {
            d0,
            f,
            h,
            k,
            lambda: 2.0 * eps0.ln(),
        });
    }
    Ok(TraceClassData {
        trace: t,
        entries,
        log_norm: log_norm_of_trace(t),
    })
}

/// The exact step function `Ψ` on `(4, X]`: one breakpoint per trace with
/// `log NP <= log X`, enumerated data-parallel over traces and merged in
/// trace order.
pub fn length_spectrum(x: f64) -> Result<PsiStep> {
    if !(x > 4.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "length_spectrum requires finite X > 4, got {x}"
        )));
    }
    let lx = x.ln();
    // norm(t) <= X  ⇔  ε = (t+√(t²−4))/2 <= √X  ⇔  t = ε + 1/ε <= √X + 1/√X
    let mut t_stop = (x.sqrt() + 1.0 / x.sqrt()).floor() as i64;
    while t_stop >= 3 && log_norm_of_trace(t_stop) > lx {
        t_stop -= 1;
    }
    while log_norm_of_trace(t_stop + 1) <= lx {
        t_stop += 1;
    }
    if t_stop < 3 {
        return Ok(PsiStep {
            breakpoints: Vec::new(),
            prefix: Vec::new(),
            log_coverage: lx,
        });
    }
    let n = (t_stop - 2) as usize;
    let per_trace = exec::map_range(n, |i| trace_classes(3 + i as i64));
    let mut breakpoints = Vec::with_capacity(n);
    let mut prefix = Vec::with_capacity(n);
    let mut running = 0.0f64;
    for data in per_trace {
        let data = data?;
        let jump = data.jump();
        running += jump;
        breakpoints.push(PsiBreakpoint {
            trace: data.trace,
            log_norm: data.log_norm,
            jump,
        });
        prefix.push(running);
    }
    Ok(PsiStep {
        breakpoints,
        prefix,
        log_coverage: lx,
    })
}

/// `Ψ(X)`: sum of jumps with `log NP <= log X`.
pub fn psi(x: f64, spectrum: &PsiStep) -> Result<f64> {
    if !(x > 4.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "psi requires finite X > 4, got {x}"
        )));
    }
    let lx = x.ln();
    if lx > spectrum.log_coverage {
        return Err(Error::SpectrumTruncated {
            x,
            coverage: spectrum.log_coverage.exp(),
        });
    }
    Ok(spectrum.value_at_log(lx))
}

/// Discriminant-first enumeration: every primitive discriminant whose
/// fundamental unit satisfies `2·log ε0 <= log X` (i.e. the primitive class
/// itself has norm `<= X`), sorted by `d0`.
///
/// This is the dual route to [`length_spectrum`]: emitting, for each listed
/// discriminant and each power `k` with `2k·log ε0 <= log X`, `h` classes of
/// weight `Λ = 2·log ε0`, reproduces the trace-first enumeration exactly.
pub fn primitive_discriminants(x: f64) -> Result<Vec<PrimitiveDiscriminant>> {
    if !(x > 4.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "primitive_discriminants requires finite X > 4, got {x}"
        )));
    }
    let lx = x.ln();
    let mut t_stop = (x.sqrt() + 1.0 / x.sqrt()).floor() as i64;
    while t_stop >= 3 && log_norm_of_trace(t_stop) > lx {
        t_stop -= 1;
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    // (t0, u0) with u0² | t0² − 4 ranges over all fundamental solutions once
    // we keep only pairs where no smaller trace solves the same discriminant.
    for t0 in 3..=t_stop {
        let factors = merge_factors(factorize(t0 - 2), factorize(t0 + 2));
        let disc = (t0 - 2) * (t0 + 2);
        for u0 in square_divisors_from_factors(&factors) {
            let d0 = disc / (u0 * u0);
            if !is_discriminant(d0) || seen.contains(&d0) {
                continue;
            }
            if pell_fundamental(d0, t0)? != (t0, u0) {
                continue; // a smaller trace already solves d0
            }
            seen.insert(d0);
            let eps0 = (t0 as f64 + ((t0 * t0 - 4) as f64).sqrt()) / 2.0;
            out.push(PrimitiveDiscriminant {
                d0,
                t0,
                u0,
                h: class_number(d0)?,
                log_eps: eps0.ln(),
            });
        }
    }
    out.sort_unstable_by_key(|p| p.d0);
    Ok(out)
}
