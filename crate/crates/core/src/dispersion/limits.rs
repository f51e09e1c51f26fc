//! Asymptotic constants of the critical speed.
//!
//! For large road diffusion `w* ~ h sqrt(D)`, where `h` is the critical
//! speed of the rescaled problem with `D = 1`, `q = 0` in which the field
//! relation degenerates to the parabola `α = (f'(0) + dβ²) / c`.
//! For strong rightward drift `w* ~ k q`.

use super::chi_raw;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::numeric::{bisect_predicate, golden_min, linspace};

const SAMPLES: usize = 4096;

/// `h` and `k` for one parameter set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitConstants {
    pub h: f64,
    pub k: f64,
}

fn check_rates(f_prime_0: f64, g_prime_0: f64) -> Result<()> {
    if !(f_prime_0 > 0.0 && f_prime_0.is_finite()) {
        return Err(Error::invalid("f'(0)", f_prime_0, "must be positive"));
    }
    if !g_prime_0.is_finite() {
        return Err(Error::invalid("g'(0)", g_prime_0, "must be finite"));
    }
    Ok(())
}

/// Separation between the parabola and the upper road branch at speed `c`,
/// minimised over `β`; nonpositive when they meet.
fn parabola_gap(p: &ModelParams, f_prime_0: f64, g_prime_0: f64, c: f64) -> f64 {
    let upper = |beta: f64| {
        let disc = c * c + 4.0 * (chi_raw(p, beta) - g_prime_0);
        if disc < 0.0 {
            return f64::NEG_INFINITY;
        }
        0.5 * (c + disc.sqrt())
    };
    let gap = |beta: f64| (f_prime_0 + p.d * beta * beta) / c - upper(beta);

    let open = -p.nu / p.d + 1e-12;
    let m = g_prime_0 - 0.25 * c * c;
    let lo = if m >= p.mu {
        return f64::INFINITY;
    } else {
        let b = p.nu * m / (p.d * (p.mu - m));
        if b.is_finite() {
            b.max(open)
        } else {
            open
        }
    };
    let alpha_cap = 0.5 * (c + (c * c + 4.0 * (p.mu - g_prime_0).max(0.0)).sqrt());
    let hi = (c * alpha_cap / p.d).sqrt() + 1.0;
    if lo >= hi {
        return f64::INFINITY;
    }
    let grid = linspace(lo, hi, SAMPLES);
    let vals: Vec<f64> = grid.iter().map(|&b| gap(b)).collect();
    let i = (0..SAMPLES)
        .filter(|&i| vals[i].is_finite())
        .min_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let Some(i) = i else {
        return f64::INFINITY;
    };
    let a = grid[i.saturating_sub(1)];
    let b = grid[(i + 1).min(SAMPLES - 1)];
    let (_, refined) = golden_min(&gap, a, b, 1e-15 * (1.0 + b.abs()));
    refined.min(vals[i])
}

/// `h = lim w* / sqrt(D)` as `D → ∞`, accurate to about `1e-10` relative.
pub fn limit_h(params: &ModelParams, f_prime_0: f64, g_prime_0: f64) -> Result<f64> {
    check_rates(f_prime_0, g_prime_0)?;
    let meets = |c: f64| parabola_gap(params, f_prime_0, g_prime_0, c) <= 0.0;
    let mut hi = 1.0;
    let mut guard = 0;
    while !meets(hi) {
        hi *= 2.0;
        guard += 1;
        if guard > 60 {
            return Err(Error::Bracket {
                what: "limit h",
                detail: format!("no contact below c = {hi:e}"),
            });
        }
    }
    let mut lo = 0.5 * hi;
    while meets(lo) {
        lo *= 0.5;
        if lo < 1e-300 {
            return Ok(0.0);
        }
    }
    let (_, hi) = bisect_predicate(meets, lo, hi, 1e-12 * hi);
    Ok(hi)
}

/// `k = lim w*+ / q` as `q → +∞`:
/// `1` when `g'(0) ≥ μ`, else `1 / (1 + max_{β≥0} (χ(β) - g'(0)) / (f'(0) + dβ²))`.
pub fn limit_k(params: &ModelParams, f_prime_0: f64, g_prime_0: f64) -> Result<f64> {
    check_rates(f_prime_0, g_prime_0)?;
    if g_prime_0 >= params.mu {
        return Ok(1.0);
    }
    let ratio = |t: f64| {
        let beta = t / (1.0 - t);
        (chi_raw(params, beta) - g_prime_0) / (f_prime_0 + params.d * beta * beta)
    };
    let neg = |t: f64| -ratio(t);
    let grid = linspace(0.0, 1.0 - 1.0 / SAMPLES as f64, SAMPLES);
    let i = (0..SAMPLES)
        .min_by(|&i, &j| neg(grid[i]).total_cmp(&neg(grid[j])))
        .unwrap_or(0);
    let a = grid[i.saturating_sub(1)];
    let b = grid[(i + 1).min(SAMPLES - 1)];
    let (_, best) = golden_min(&neg, a, b, 1e-15);
    let best = (-best).max(ratio(grid[i]));
    Ok(1.0 / (1.0 + best.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::critical_speed_with;
    use crate::model::Direction;

    fn unit() -> ModelParams {
        ModelParams::new(1.0, 1.0, 1.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn k_matches_brute_force_maximum() {
        // β / ((1 + β)(1 + β²)) maximised on a fine grid
        let best = (1..=2_000_000)
            .map(|i| {
                let b = i as f64 * 1e-6 * 10.0;
                b / ((1.0 + b) * (1.0 + b * b))
            })
            .fold(0.0f64, f64::max);
        let k = limit_k(&unit(), 1.0, 0.0).unwrap();
        assert!((k - 1.0 / (1.0 + best)).abs() < 1e-9, "k = {k}");
        assert!((k - 0.783).abs() < 1e-3);
    }

    #[test]
    fn k_is_one_when_road_grows_fast() {
        assert_eq!(limit_k(&unit(), 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(limit_k(&unit(), 1.0, 3.0).unwrap(), 1.0);
        let k = limit_k(&unit(), 1.0, 0.999).unwrap();
        assert!(k < 1.0 && k > 0.99);
    }

    #[test]
    fn k_in_unit_interval() {
        for &(fp, gp) in &[(1.0, -1.0), (0.3, 0.2), (4.0, -5.0)] {
            let k = limit_k(&unit(), fp, gp).unwrap();
            assert!(k > 0.0 && k < 1.0, "{k}");
        }
    }

    #[test]
    fn h_matches_direct_scan() {
        // oracle: the parabola meets the upper root at some β on a plain grid
        let meets = |c: f64| {
            (0..400_000).any(|i| {
                let b = -0.999 + i as f64 * 2.5e-5;
                let chi = b / (1.0 + b);
                let disc = c * c + 4.0 * chi;
                disc >= 0.0 && 0.5 * (c + disc.sqrt()) >= (1.0 + b * b) / c
            })
        };
        let (mut lo, mut hi) = (0.1, 4.0);
        assert!(!meets(lo) && meets(hi));
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if meets(mid) {
                hi = mid
            } else {
                lo = mid
            }
        }
        let h = limit_h(&unit(), 1.0, 0.0).unwrap();
        assert!((h - hi).abs() < 1e-6, "h = {h}, oracle {hi}");
    }

    #[test]
    fn critical_speed_approaches_limits() {
        let base = unit();
        let h = limit_h(&base, 1.0, 0.0).unwrap();
        let big = base.with_big_d(1e4).unwrap();
        let w = critical_speed_with(&big, 1.0, 0.0, Direction::Right, 1e-9, &Default::default())
            .unwrap()
            .w_star;
        assert!((w / 100.0 / h - 1.0).abs() < 0.02, "{} vs {h}", w / 100.0);

        let k = limit_k(&base, 1.0, 0.0).unwrap();
        let fast = base.with_q(1e3).unwrap();
        let w = critical_speed_with(&fast, 1.0, 0.0, Direction::Right, 1e-9, &Default::default())
            .unwrap()
            .w_star;
        assert!((w / 1e3 / k - 1.0).abs() < 0.02, "{} vs {k}", w / 1e3);
    }
}
