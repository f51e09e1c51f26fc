#![allow(dead_code)]

use roadfield::model::Direction;
use roadfield::ModelParams;

/// Overlap test at one `(c, β)` by the textbook quadratic formula.
pub fn overlap_at(p: &ModelParams, fp0: f64, gp0: f64, c: f64, beta: f64) -> bool {
    if beta <= -p.nu / p.d {
        return false;
    }
    let chi = p.d * p.mu * beta / (p.nu + p.d * beta);
    // road: D α² - (c - q) α + (g'(0) - χ) ≤ 0
    let s = c - p.q;
    let disc_r = s * s - 4.0 * p.big_d * (gp0 - chi);
    // field: d α² - c α + (d β² + f'(0)) ≤ 0
    let disc_f = c * c - 4.0 * p.d * (p.d * beta * beta + fp0);
    if disc_r < 0.0 || disc_f < 0.0 {
        return false;
    }
    let (r1, r2) = (
        (s - disc_r.sqrt()) / (2.0 * p.big_d),
        (s + disc_r.sqrt()) / (2.0 * p.big_d),
    );
    let (f1, f2) = (
        (c - disc_f.sqrt()) / (2.0 * p.d),
        (c + disc_f.sqrt()) / (2.0 * p.d),
    );
    r1.max(f1) <= r2.min(f2)
}

/// Whether any β on the lattice `h ℤ` gives an overlap at speed `c`.
pub fn overlap_on_lattice(p: &ModelParams, fp0: f64, gp0: f64, c: f64, h: f64) -> bool {
    let ck = 2.0 * (p.d * fp0).sqrt();
    let r = ((c * c - ck * ck).max(0.0)).sqrt() / (2.0 * p.d);
    let k_max = (r / h).floor() as i64;
    (-k_max..=k_max).any(|k| overlap_at(p, fp0, gp0, c, k as f64 * h))
}

/// Least `c = c_K + n h` (n ≥ 0) at which the lattice scan finds an overlap.
/// A coarse pass with step `64 h` locates the bracket first; overlap is
/// monotone in `c`, so this visits the same first fine point as a full scan.
pub fn brute_force_speed(p: &ModelParams, fp0: f64, gp0: f64, dir: Direction, h: f64) -> f64 {
    let p = p.oriented(dir);
    let ck = 2.0 * (p.d * fp0).sqrt();
    let coarse = 64;
    let mut n = 0usize;
    while !overlap_on_lattice(&p, fp0, gp0, ck + (n + coarse) as f64 * h, h) {
        n += coarse;
        assert!(n < 100_000_000, "no overlap found");
    }
    while !overlap_on_lattice(&p, fp0, gp0, ck + n as f64 * h, h) {
        n += 1;
    }
    ck + n as f64 * h
}
