//! Plane-wave geometry of the linearised road–field system.
//!
//! Exponential solutions `e^{-α(x-ct)} (1, γ e^{-βy})` with
//! `γ = μ / (ν + dβ)` satisfy, in the `(β, α)` plane,
//!
//! ```text
//! -D α² + (c - q) α = g'(0) - χ(β)        χ(β) = dμβ / (ν + dβ)
//!  c α - d (α² + β²) = f'(0)
//! ```
//!
//! The first relation bounds the slab `S(c)` between the curves
//! `Σ±(c) = { α = α_D^±(c, β) }`, the second is the circle `Γ(c)` bounding the
//! disc `G(c)`. Supersolutions exist iff `S(c) ∩ G(c)` is nonempty, and the
//! critical speed `w*` is the least such `c ≥ c_K`.

mod limits;
mod plot;

pub use limits::{limit_h, limit_k, LimitConstants};
pub use plot::{plot_geometry, GeometryPlot};

use crate::error::{Error, Result};
use crate::model::{kpp_speed, Direction, FieldReaction, ModelParams, RoadReaction};
use crate::numeric::{bisect_predicate, golden_min, linspace};

/// Default number of β samples in the intersection scan.
pub const DEFAULT_BETA_SAMPLES: usize = 4096;
/// A gap below this counts as contact between the slab and the disc.
pub const TANGENCY_TOL: f64 = 1e-10;
/// Largest value [`chi_inv`] reports before declaring divergence.
pub const CHI_INV_CAP: f64 = 1e12;
/// The upper bracket of the speed search may not exceed `2^40 c_K`.
pub const BRACKET_CAP: f64 = 1_099_511_627_776.0;

const OPEN_ENDPOINT: f64 = 1e-12;

/// A point `(β, α)` of the dispersion plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DispersionPoint {
    pub beta: f64,
    pub alpha: f64,
}

/// The `α`-section of `S(c)` or `G(c)` at a fixed `β`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlabInterval {
    pub beta: f64,
    pub lo: f64,
    pub hi: f64,
    pub empty: bool,
}

impl SlabInterval {
    fn new(beta: f64, bounds: Option<(f64, f64)>) -> Self {
        match bounds {
            Some((lo, hi)) => SlabInterval {
                beta,
                lo,
                hi,
                empty: false,
            },
            None => SlabInterval {
                beta,
                lo: f64::NAN,
                hi: f64::NAN,
                empty: true,
            },
        }
    }

    pub fn contains(&self, alpha: f64) -> bool {
        !self.empty && self.lo <= alpha && alpha <= self.hi
    }

    pub fn intersect(&self, other: &SlabInterval) -> SlabInterval {
        if self.empty || other.empty {
            return SlabInterval::new(self.beta, None);
        }
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        SlabInterval::new(self.beta, (lo <= hi).then_some((lo, hi)))
    }

    pub fn width(&self) -> f64 {
        if self.empty {
            0.0
        } else {
            self.hi - self.lo
        }
    }
}

/// Result of the critical speed search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalSpeed {
    pub w_star: f64,
    /// `w* = c_K`, decided by membership of `(0, c_K/2d)` in `S(c_K)`.
    pub at_kpp: bool,
    /// Contact point `(β*, α*)` of `S(w*)` and `G(w*)` when `w* > c_K`.
    pub witness: Option<DispersionPoint>,
    pub tol: f64,
    pub c_kpp: f64,
}

/// Tuning of the β-scan behind [`intersects`] and [`critical_speed`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    pub beta_samples: usize,
    pub tangency_tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            beta_samples: DEFAULT_BETA_SAMPLES,
            tangency_tol: TANGENCY_TOL,
        }
    }
}

fn check_beta(params: &ModelParams, beta: f64) -> Result<()> {
    if beta.is_nan() || beta <= -params.nu / params.d {
        return Err(Error::invalid("beta", beta, "must exceed -nu/d"));
    }
    Ok(())
}

#[inline]
fn chi_raw(p: &ModelParams, beta: f64) -> f64 {
    p.d * p.mu * beta / (p.nu + p.d * beta)
}

/// `χ(β) = dμβ / (ν + dβ)`, defined for `β > -ν/d`.
pub fn chi(params: &ModelParams, beta: f64) -> Result<f64> {
    check_beta(params, beta)?;
    Ok(chi_raw(params, beta))
}

/// Inverse of [`chi`]: the unique `β` with `χ(β) = m`, for `m < μ`.
pub fn chi_inv(params: &ModelParams, m: f64) -> Result<f64> {
    if m.is_nan() || m >= params.mu {
        return Err(Error::invalid("m", m, "chi never reaches mu"));
    }
    let beta = params.nu * m / (params.d * (params.mu - m));
    if beta > CHI_INV_CAP {
        return Err(Error::Overflow {
            what: "chi_inv",
            value: m,
        });
    }
    Ok(beta)
}

/// Whether the road relation has real roots for some `β`:
/// `(c - q)² > 4D (g'(0) - μ)`.
pub fn real_roots_exist(params: &ModelParams, g_prime_0: f64, c: f64) -> bool {
    let s = c - params.q;
    s * s > 4.0 * params.big_d * (g_prime_0 - params.mu)
}

/// Leftmost abscissa `β̲(c)` of `Σ(c)`, clamped just inside `β > -ν/d`.
/// `None` when the road relation has no real roots at this speed.
pub fn beta_lower(params: &ModelParams, g_prime_0: f64, c: f64) -> Option<f64> {
    if !real_roots_exist(params, g_prime_0, c) {
        return None;
    }
    let s = c - params.q;
    let m = g_prime_0 - s * s / (4.0 * params.big_d);
    let open = -params.nu / params.d + OPEN_ENDPOINT;
    let beta = params.nu * m / (params.d * (params.mu - m));
    Some(if beta.is_finite() {
        beta.max(open)
    } else {
        open
    })
}

/// Roots `α_D^-`, `α_D^+` of the road relation, in cancellation-free form.
#[inline]
fn sigma_raw(p: &ModelParams, g_prime_0: f64, c: f64, beta: f64) -> Option<(f64, f64)> {
    let s = c - p.q;
    let excess = chi_raw(p, beta) - g_prime_0;
    let mut disc = s * s + 4.0 * p.big_d * excess;
    if disc < 0.0 {
        let scale = s * s + 4.0 * p.big_d * excess.abs();
        if disc < -1e-13 * scale {
            return None;
        }
        disc = 0.0;
    }
    let root = disc.sqrt();
    let two_d = 2.0 * p.big_d;
    if s >= 0.0 {
        let hi = (s + root) / two_d;
        let lo = if s + root == 0.0 {
            0.0
        } else {
            -2.0 * excess / (s + root)
        };
        Some((lo, hi))
    } else {
        let lo = (s - root) / two_d;
        Some((lo, -2.0 * excess / (s - root)))
    }
}

/// `α`-section of `Γ(c)`'s disc at `β`, `None` outside the disc.
#[inline]
fn circle_raw(p: &ModelParams, c: f64, c_kpp: f64, beta: f64) -> Option<(f64, f64)> {
    let four_d2 = 4.0 * p.d * p.d;
    let r2 = (c - c_kpp) * (c + c_kpp) / four_d2;
    let s2 = r2 - beta * beta;
    if s2 < 0.0 {
        return None;
    }
    let centre = c / (2.0 * p.d);
    let s = s2.sqrt();
    let lo = (c_kpp * c_kpp / four_d2 + beta * beta) / (centre + s);
    Some((lo, centre + s))
}

/// Radius `r(c) = sqrt(c² - c_K²) / 2d` of `Γ(c)`.
pub fn circle_radius(params: &ModelParams, f_prime_0: f64, c: f64) -> Result<f64> {
    let c_kpp = kpp_speed(params.d, f_prime_0)?;
    if c < c_kpp {
        return Err(Error::invalid("c", c, "must be at least the KPP speed"));
    }
    Ok(((c - c_kpp) * (c + c_kpp)).sqrt() / (2.0 * params.d))
}

/// `[α_D^-(c, β), α_D^+(c, β)]`; empty where the discriminant is negative.
pub fn sigma_interval(
    params: &ModelParams,
    g_prime_0: f64,
    c: f64,
    beta: f64,
) -> Result<SlabInterval> {
    check_beta(params, beta)?;
    Ok(SlabInterval::new(
        beta,
        sigma_raw(params, g_prime_0, c, beta),
    ))
}

/// `[c/2d - s, c/2d + s]` with `s = sqrt(r(c)² - β²)`; empty for `|β| > r(c)`.
pub fn circle_interval(
    params: &ModelParams,
    f_prime_0: f64,
    c: f64,
    beta: f64,
) -> Result<SlabInterval> {
    let c_kpp = kpp_speed(params.d, f_prime_0)?;
    if !(c >= c_kpp) {
        return Err(Error::invalid("c", c, "must be at least the KPP speed"));
    }
    Ok(SlabInterval::new(beta, circle_raw(params, c, c_kpp, beta)))
}

/// Smallest separation between `S(c)` and `G(c)` over the scanned `β`-range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapMinimum {
    pub beta: f64,
    /// `max(lower bounds) - min(upper bounds)`; nonpositive means overlap.
    pub gap: f64,
    /// Midpoint of the (possibly empty) overlap at `beta`.
    pub alpha: f64,
}

/// The linearised problem at fixed rates, oriented for rightward propagation.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Linearization {
    pub params: ModelParams,
    pub g_prime_0: f64,
    pub c_kpp: f64,
}

impl Linearization {
    pub fn new(params: &ModelParams, f_prime_0: f64, g_prime_0: f64) -> Result<Self> {
        if !g_prime_0.is_finite() {
            return Err(Error::invalid("g'(0)", g_prime_0, "must be finite"));
        }
        Ok(Linearization {
            params: *params,
            g_prime_0,
            c_kpp: kpp_speed(params.d, f_prime_0)?,
        })
    }

    #[inline]
    fn gap(&self, c: f64, beta: f64) -> (f64, f64) {
        match (
            sigma_raw(&self.params, self.g_prime_0, c, beta),
            circle_raw(&self.params, c, self.c_kpp, beta),
        ) {
            (Some((a, b)), Some((e, f))) => {
                let lo = a.max(e);
                let hi = b.min(f);
                (lo - hi, 0.5 * (lo + hi))
            }
            _ => (f64::INFINITY, f64::NAN),
        }
    }

    /// Scan `β ∈ [max(β̲(c), -r(c)), r(c)]` and refine the best local minima
    /// of the gap by golden section.
    pub fn min_gap(&self, c: f64, samples: usize) -> Option<GapMinimum> {
        let p = &self.params;
        let beta_lo = beta_lower(p, self.g_prime_0, c)?;
        let r = ((c - self.c_kpp) * (c + self.c_kpp)).max(0.0).sqrt() / (2.0 * p.d);
        if r == 0.0 {
            if beta_lo > 0.0 {
                return None;
            }
            let (gap, alpha) = self.gap(c, 0.0);
            return Some(GapMinimum {
                beta: 0.0,
                gap,
                alpha,
            });
        }
        let a = beta_lo.max(-r);
        let b = r;
        if a > b {
            return None;
        }
        let n = samples.max(3);
        let grid = linspace(a, b, n);
        let vals: Vec<f64> = grid.iter().map(|&beta| self.gap(c, beta).0).collect();

        let mut candidates: Vec<usize> = (0..n)
            .filter(|&i| {
                vals[i].is_finite()
                    && (i == 0 || vals[i] <= vals[i - 1])
                    && (i == n - 1 || vals[i] <= vals[i + 1])
            })
            .collect();
        candidates.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        candidates.truncate(4);

        let mut best: Option<(f64, f64)> = None;
        for i in candidates {
            let left = grid[i.saturating_sub(1)];
            let right = grid[(i + 1).min(n - 1)];
            let xtol = 1e-15 * (1.0 + left.abs().max(right.abs()));
            let (beta, gap) = golden_min(&|x| self.gap(c, x).0, left, right, xtol);
            let (beta, gap) = if gap <= vals[i] {
                (beta, gap)
            } else {
                (grid[i], vals[i])
            };
            if best.is_none_or(|(_, g)| gap < g) {
                best = Some((beta, gap));
            }
        }
        let (beta, gap) = best?;
        Some(GapMinimum {
            beta,
            gap,
            alpha: self.gap(c, beta).1,
        })
    }

    pub fn intersects(&self, c: f64, opts: &SearchOptions) -> bool {
        self.min_gap(c, opts.beta_samples)
            .is_some_and(|m| m.gap <= opts.tangency_tol)
    }

    pub fn critical_speed(&self, tol: f64, opts: &SearchOptions) -> Result<CriticalSpeed> {
        if !(tol > 0.0) {
            return Err(Error::invalid("tol", tol, "must be positive"));
        }
        let c_kpp = self.c_kpp;
        if self.intersects(c_kpp, opts) {
            return Ok(CriticalSpeed {
                w_star: c_kpp,
                at_kpp: true,
                witness: None,
                tol,
                c_kpp,
            });
        }
        let mut lo = c_kpp;
        let mut step = 1.0;
        let mut hi = c_kpp + step;
        while !self.intersects(hi, opts) {
            lo = hi;
            step *= 2.0;
            hi = c_kpp + step;
            if hi > BRACKET_CAP * c_kpp {
                return Err(Error::Bracket {
                    what: "critical speed",
                    detail: format!("no intersection below {hi:e}"),
                });
            }
        }
        let (_, hi) = bisect_predicate(|c| self.intersects(c, opts), lo, hi, tol);
        let witness = self
            .min_gap(hi, opts.beta_samples)
            .map(|m| DispersionPoint {
                beta: m.beta,
                alpha: m.alpha,
            });
        Ok(CriticalSpeed {
            w_star: hi,
            at_kpp: false,
            witness,
            tol,
            c_kpp,
        })
    }
}

/// Whether `S(c) ∩ G(c)` is nonempty, by a `β`-scan with `beta_samples`
/// points followed by local refinement of the gap function.
pub fn intersects(
    params: &ModelParams,
    f_prime_0: f64,
    g_prime_0: f64,
    c: f64,
    beta_samples: usize,
) -> Result<bool> {
    let lin = Linearization::new(params, f_prime_0, g_prime_0)?;
    if !(c >= lin.c_kpp) {
        return Err(Error::invalid("c", c, "must be at least the KPP speed"));
    }
    let opts = SearchOptions {
        beta_samples,
        ..SearchOptions::default()
    };
    Ok(lin.intersects(c, &opts))
}

/// Minimal gap between `S(c)` and `G(c)`; `None` when the scanned range is empty.
pub fn min_gap(
    params: &ModelParams,
    f_prime_0: f64,
    g_prime_0: f64,
    c: f64,
    beta_samples: usize,
) -> Result<Option<GapMinimum>> {
    let lin = Linearization::new(params, f_prime_0, g_prime_0)?;
    if !(c >= lin.c_kpp) {
        return Err(Error::invalid("c", c, "must be at least the KPP speed"));
    }
    Ok(lin.min_gap(c, beta_samples))
}

/// Critical speed `w*±` for the given reactions and direction.
pub fn critical_speed(
    params: &ModelParams,
    f: &FieldReaction,
    g: &RoadReaction,
    direction: Direction,
    tol: f64,
) -> Result<CriticalSpeed> {
    critical_speed_with(
        params,
        f.f_prime_0(),
        g.g_prime_0(),
        direction,
        tol,
        &SearchOptions::default(),
    )
}

/// [`critical_speed`] from the linearisation rates alone.
pub fn critical_speed_with(
    params: &ModelParams,
    f_prime_0: f64,
    g_prime_0: f64,
    direction: Direction,
    tol: f64,
    opts: &SearchOptions,
) -> Result<CriticalSpeed> {
    Linearization::new(&params.oriented(direction), f_prime_0, g_prime_0)?.critical_speed(tol, opts)
}

/// Right-hand side of the enhancement threshold,
/// `2 - g'(0)/f'(0) ∓ q / sqrt(d f'(0))`.
pub fn threshold_value(
    params: &ModelParams,
    f_prime_0: f64,
    g_prime_0: f64,
    direction: Direction,
) -> f64 {
    2.0 - g_prime_0 / f_prime_0 - direction.sign() * params.q / (params.d * f_prime_0).sqrt()
}

/// Closed-form test for `w*± = c_K`: `D/d ≤ 2 - g'(0)/f'(0) ∓ q / sqrt(d f'(0))`.
pub fn threshold_predicts_ck(
    params: &ModelParams,
    f_prime_0: f64,
    g_prime_0: f64,
    direction: Direction,
) -> bool {
    params.big_d / params.d <= threshold_value(params, f_prime_0, g_prime_0, direction)
}

/// The mortality form `D/d ≤ 2 + ρ/f'(0) ∓ q / sqrt(d f'(0))`.
pub fn mortality_threshold_predicts_ck(
    params: &ModelParams,
    f_prime_0: f64,
    rho: f64,
    direction: Direction,
) -> bool {
    let rhs = 2.0 + rho / f_prime_0 - direction.sign() * params.q / (params.d * f_prime_0).sqrt();
    params.big_d / params.d <= rhs
}
