//! Regenerates the bundled spectral table `data/maass_pslz.txt`.
//!
//! The first ten entries are the published low-lying spectral parameters of
//! the modular surface (Hejhal's and Then's computations, rounded to six
//! decimals). Beyond those the file continues with a deterministic
//! inhomogeneous-Poisson draw whose intensity is the smoothed counting
//! density `ρ(t) = t/6 − log(t/(πe))/π` (Weyl main term plus the
//! scattering-phase correction), up to `t ≈ 250`. Poisson spacing matches
//! the conjectured (Poissonian) gap statistics of this spectrum, and the
//! count stays far inside the Weyl-law diagnostic band.
//!
//! Usage: cargo run --release -p geodesic-lab --example gen_maass_table > data/maass_pslz.txt

use std::f64::consts::PI;

const PUBLISHED: [f64; 10] = [
    9.533695, 12.173008, 13.779751, 14.358510, 16.138073,
    16.644259, 17.738563, 18.180918, 19.423481, 19.484714,
];

const T_MAX: f64 = 250.0;
const SEED: u64 = 0x6D61617373; // "maass"

fn density(t: f64) -> f64 {
    t / 6.0 - (t / (PI * std::f64::consts::E)).ln() / PI
}

struct SplitMix64(u64);

impl SplitMix64 {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^= z >> 31;
        z as f64 / (u64::MAX as f64 + 1.0)
    }
}

fn main() {
    println!("# Maass cusp form spectral parameters t_j for PSL(2,Z), eigenvalue 1/4 + t_j^2.");
    println!("# Lines 1-10: published low-lying values (Hejhal; Then), rounded to 6 decimals.");
    println!("# Remainder: deterministic synthetic continuation to t_max ~ 250 for coverage");
    println!("# testing: inhomogeneous Poisson draw with intensity t/6 - log(t/(pi*e))/pi,");
    println!("# splitmix64 seed 0x6D61617373. Not genuine eigenvalues beyond line 10; the");
    println!("# repository validates this file only through the Weyl-law diagnostic.");
    println!("# Regenerate: cargo run -p geodesic-lab --example gen_maass_table");
    for v in PUBLISHED {
        println!("{v:.6}");
    }
    let mut rng = SplitMix64(SEED);
    let mut t = PUBLISHED[9];
    loop {
        let u = rng.next_f64().max(1e-12);
        t += -u.ln() / density(t);
        if t > T_MAX {
            break;
        }
        println!("{t:.9}");
    }
}
