//! Independent oracles shared by the integration and acceptance suites.
//! Everything here exists only in test code and never touches the
//! implementation paths it checks.

use std::collections::{HashMap, HashSet, VecDeque};

pub const BUNDLED_TABLE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/maass_pslz.txt");

/// Plain adaptive Simpson with an absolute floor of 1e−14.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
        }
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol.max(1e-14), 48)
}

/// Breakpoint-aware quadrature: split `[a, b]` at the interior cut points and
/// run adaptive Simpson per panel.
pub fn quadrature_with_cuts<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cuts: &[f64], tol: f64) -> f64 {
    let mut knots: Vec<f64> = cuts.iter().copied().filter(|&c| c > a && c < b).collect();
    knots.sort_by(|p, q| p.partial_cmp(q).unwrap());
    knots.dedup();
    let mut ends = vec![a];
    ends.extend(knots);
    ends.push(b);
    ends.windows(2)
        .map(|w| adaptive_simpson(f, w[0], w[1], tol * (w[1] - w[0]) / (b - a)))
        .sum()
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

/// Enumerates the primitive reduced forms of discriminant `d0` from scratch
/// (independent of the library's implementation).
fn reduced_forms_brute(d0: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let sd = (d0 as f64).sqrt();
    let mut b = 1i64;
    while (b * b) < d0 {
        if (b * b - d0) % 4 == 0 {
            let m = (b * b - d0) / 4;
            for a in 1..=(-m) {
                if m % a == 0 {
                    for aa in [a, -a] {
                        let c = m / aa;
                        if (sd - 2.0 * aa.abs() as f64).abs() < b as f64
                            && (b as f64) < sd
                            && gcd(gcd(aa, b), c) == 1
                        {
                            out.push((aa, b, c));
                        }
                    }
                }
            }
        }
        b += 1;
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Orbit-closure class-number oracle: BFS from every reduced form under the
/// proper-equivalence moves `(a,b,c) → (c,−b,a)` and `(a,b,c) → (a, b+2a,
/// a+b+c)` (and its inverse), coefficients bounded by `4·d0`; the class
/// number is the number of distinct components met by reduced forms.
pub fn class_number_oracle(d0: i64) -> u64 {
    let bound = 4 * d0;
    let reduced = reduced_forms_brute(d0);
    let mut component: HashMap<(i64, i64, i64), usize> = HashMap::new();
    let mut n_comp = 0usize;
    for &start in &reduced {
        if component.contains_key(&start) {
            continue;
        }
        n_comp += 1;
        let mut queue = VecDeque::from([start]);
        component.insert(start, n_comp);
        while let Some((a, b, c)) = queue.pop_front() {
            let moves = [
                (c, -b, a),
                (a, b + 2 * a, a + b + c),
                (a, b - 2 * a, a - b + c),
            ];
            for g in moves {
                if g.0.abs() <= bound
                    && g.1.abs() <= bound
                    && g.2.abs() <= bound
                    && !component.contains_key(&g)
                {
                    component.insert(g, n_comp);
                    queue.push_back(g);
                }
            }
        }
    }
    let distinct: HashSet<usize> = reduced.iter().map(|f| component[f]).collect();
    distinct.len() as u64
}

type Mat = (i64, i64, i64, i64);

fn psl_canonical(m: Mat) -> Mat {
    let neg = (-m.0, -m.1, -m.2, -m.3);
    if m > neg {
        m
    } else {
        neg
    }
}

fn conjugate(m: Mat, g: Mat) -> Mat {
    // g m g^{-1} with det g = 1, so g^{-1} = (s, −q, −r, p)
    let (p, q, r, s) = g;
    let (a, b, c, d) = m;
    let (e, f, gg, h) = (p * a + q * c, p * b + q * d, r * a + s * c, r * b + s * d);
    psl_canonical((
        e * s + f * (-r),
        e * (-q) + f * p,
        gg * s + h * (-r),
        gg * (-q) + h * p,
    ))
}

/// Matrix-level oracle: the number of PSL(2,Z)-conjugacy classes among
/// integer matrices with `|trace| = t`, determinant 1 and entries bounded by
/// `bound`, found by exhaustive conjugation closure over the generators
/// S and T.
pub fn conjugacy_class_oracle(t: i64, bound: i64) -> usize {
    let mut mats: HashSet<Mat> = HashSet::new();
    for a in -bound..=bound {
        for tr in [t, -t] {
            let d = tr - a;
            if d.abs() > bound {
                continue;
            }
            // b c = a d − 1
            let target = a * d - 1;
            for b in -bound..=bound {
                if b == 0 {
                    if target == 0 {
                        for c in -bound..=bound {
                            mats.insert(psl_canonical((a, 0, c, d)));
                        }
                    }
                    continue;
                }
                if target % b == 0 && (target / b).abs() <= bound {
                    mats.insert(psl_canonical((a, b, target / b, d)));
                }
            }
        }
    }
    let gens: [Mat; 3] = [(0, -1, 1, 0), (1, 1, 0, 1), (1, -1, 0, 1)];
    let mut component: HashMap<Mat, usize> = HashMap::new();
    let mut n_comp = 0usize;
    for &m0 in &mats {
        if component.contains_key(&m0) {
            continue;
        }
        n_comp += 1;
        let mut queue = VecDeque::from([m0]);
        component.insert(m0, n_comp);
        while let Some(m) = queue.pop_front() {
            for &g in &gens {
                let w = conjugate(m, g);
                if mats.contains(&w) && !component.contains_key(&w) {
                    component.insert(w, n_comp);
                    queue.push_back(w);
                }
            }
        }
    }
    n_comp
}
