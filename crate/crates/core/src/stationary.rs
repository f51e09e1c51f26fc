//! x-independent stationary solutions `(U, V(y))` of the road–field system:
//!
//! ```text
//! -d V'' = f(V)  (y > 0)      ν V(0) = μU - g(U)      -d V'(0) = g(U)
//! ```
//!
//! Two constructions are provided: the energy method, where `V(0)` is the root
//! of an explicit function `θ`, and shooting in `U`, where `U*` is the infimum
//! of the road values whose field trajectory stays positive.

use crate::error::{Error, Result};
use crate::model::{FieldReaction, ModelParams, RoadReaction};
use crate::numeric::bisect;

/// Default RK4 step for trajectories and profiles.
pub const DEFAULT_DY: f64 = 1e-3;
/// Trajectories beyond this magnitude are classified as blowing up.
pub const MAGNITUDE_CAP: f64 = 1e3;
/// Relative energy drift tolerated before a step is declared too large.
pub const DRIFT_LIMIT: f64 = 1e-6;
/// `|V(y_max) - 1|` below this marks a profile as converged.
pub const CONVERGENCE_TOL: f64 = 1e-8;
/// Slack in the structural bounds of [`check_bounds`].
pub const BOUNDS_TOL: f64 = 1e-6;

const SCAN_POINTS: usize = 64;
const STORE_EVERY: usize = 10;

/// `y_max = 50 sqrt(d / f'(0))`, many decay lengths of the profile.
pub fn default_y_max(params: &ModelParams, f: &FieldReaction) -> f64 {
    50.0 * (params.d / f.f_prime_0()).sqrt()
}

/// A stationary solution sampled on a `y`-grid.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryProfile {
    pub u: f64,
    pub v0: f64,
    pub v_prime_0: f64,
    pub y: Vec<f64>,
    pub v: Vec<f64>,
    /// `V'` on the same grid, used for Hermite interpolation.
    pub dv: Vec<f64>,
    pub converged: bool,
    /// `|V(y_max) - 1|`.
    pub tail_residual: f64,
    /// Set when uniqueness is not guaranteed and `u` is only the smallest
    /// road value found to give a positive trajectory.
    pub minimal_candidate: bool,
}

impl StationaryProfile {
    /// The flat profile `(u, v)` on `[0, y_max]`.
    pub fn uniform(u: f64, v: f64, y_max: f64) -> Self {
        StationaryProfile {
            u,
            v0: v,
            v_prime_0: 0.0,
            y: vec![0.0, y_max],
            v: vec![v, v],
            dv: vec![0.0, 0.0],
            converged: (v - 1.0).abs() < CONVERGENCE_TOL,
            tail_residual: (v - 1.0).abs(),
            minimal_candidate: false,
        }
    }

    pub fn y_max(&self) -> f64 {
        *self.y.last().unwrap_or(&0.0)
    }

    /// `V(y)` by cubic Hermite interpolation; constant beyond the grid.
    pub fn v_at(&self, y: f64) -> f64 {
        let n = self.y.len();
        if y <= self.y[0] {
            return self.v[0];
        }
        if y >= self.y[n - 1] {
            return self.v[n - 1];
        }
        let k = self.y.partition_point(|&s| s <= y).min(n - 1) - 1;
        let h = self.y[k + 1] - self.y[k];
        let t = (y - self.y[k]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.v[k]
            + (t3 - 2.0 * t2 + t) * h * self.dv[k]
            + (-2.0 * t3 + 3.0 * t2) * self.v[k + 1]
            + (t3 - t2) * h * self.dv[k + 1]
    }

    pub fn min_v(&self) -> f64 {
        self.v.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_v(&self) -> f64 {
        self.v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Fate of a shot field trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrajectoryClass {
    /// Reached `y_max` positive without an escape certificate.
    PositiveBounded,
    HitsZero,
    /// `V > 1` with `V' > 0` (then increasing forever) or `|V|` beyond the cap.
    BlowsUp,
}

impl TrajectoryClass {
    pub fn name(self) -> &'static str {
        match self {
            TrajectoryClass::PositiveBounded => "positive-bounded",
            TrajectoryClass::HitsZero => "hits-zero",
            TrajectoryClass::BlowsUp => "blows-up",
        }
    }
}

/// The solution of `-dV'' = f(V)` from the road value `u`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub u: f64,
    pub y: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub class: TrajectoryClass,
    /// Where the classifying event happened.
    pub event_y: Option<f64>,
    /// `max |H(y) - H(0)|` over checkpoints, `H = dV'²/2 + F(V)`.
    pub energy_drift: f64,
}

impl Trajectory {
    /// `V_u` stays positive on `[0, ∞)`: membership of `u` in the shooting set.
    pub fn stays_positive(&self) -> bool {
        self.class != TrajectoryClass::HitsZero
    }
}

fn check_positive(name: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::invalid(name, x, "must be positive and finite"));
    }
    Ok(())
}

/// Integrate `V' = W`, `W' = -f(V)/d` by RK4 from
/// `V(0) = (μU - g(U))/ν`, `V'(0) = -g(U)/d` and classify the outcome.
pub fn shoot(
    params: &ModelParams,
    g: &RoadReaction,
    f: &FieldReaction,
    u: f64,
    y_max: f64,
    dy: f64,
) -> Result<Trajectory> {
    check_positive("U", u)?;
    check_positive("y_max", y_max)?;
    check_positive("dy", dy)?;
    let d = params.d;
    let gu = g.eval(u);
    let mut v = (params.mu * u - gu) / params.nu;
    let mut w = -gu / d;
    let energy = |v: f64, w: f64| 0.5 * d * w * w + f.integral(0.0, v);
    let h0 = energy(v, w);
    let scale = 1.0 + h0.abs();
    let mut drift = 0.0f64;

    let steps = (y_max / dy).ceil() as usize;
    let mut ys = Vec::with_capacity(steps + 1);
    let mut vs = Vec::with_capacity(steps + 1);
    let mut ws = Vec::with_capacity(steps + 1);
    ys.push(0.0);
    vs.push(v);
    ws.push(w);

    let escape = |v: f64, w: f64| (v > 1.0 && w > 0.0) || v.abs() > MAGNITUDE_CAP;
    let mut class = TrajectoryClass::PositiveBounded;
    let mut event_y = None;
    if v <= 0.0 {
        class = TrajectoryClass::HitsZero;
        event_y = Some(0.0);
    } else if escape(v, w) {
        class = TrajectoryClass::BlowsUp;
        event_y = Some(0.0);
    }

    let accel = |v: f64| -f.eval(v) / d;
    let mut k = 0;
    while event_y.is_none() && k < steps {
        let y = k as f64 * dy;
        let k1v = w;
        let k1w = accel(v);
        let k2v = w + 0.5 * dy * k1w;
        let k2w = accel(v + 0.5 * dy * k1v);
        let k3v = w + 0.5 * dy * k2w;
        let k3w = accel(v + 0.5 * dy * k2v);
        let k4v = w + dy * k3w;
        let k4w = accel(v + dy * k3v);
        let nv = v + dy / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        let nw = w + dy / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        k += 1;
        if nv <= 0.0 {
            class = TrajectoryClass::HitsZero;
            event_y = Some(y + dy * v / (v - nv));
        } else if escape(nv, nw) {
            class = TrajectoryClass::BlowsUp;
            event_y = Some(y + dy);
        }
        v = nv;
        w = nw;
        ys.push(k as f64 * dy);
        vs.push(v);
        ws.push(w);
        if k % 1000 == 0 || event_y.is_some() || k == steps {
            drift = drift.max((energy(v, w) - h0).abs());
        }
    }
    if drift > DRIFT_LIMIT * scale {
        return Err(Error::StepTooLarge {
            drift,
            limit: DRIFT_LIMIT * scale,
        });
    }
    Ok(Trajectory {
        u,
        y: ys,
        v: vs,
        w: ws,
        class,
        event_y,
        energy_drift: drift,
    })
}

/// `θ(σ) = ν²ρ²σ² / (2d(μ+ρ)²) - ∫_σ^1 f`; its root in `(0, 1]` is `V(0)`
/// for the mortality road `g(u) = -ρu`. NaN outside `[0, 1]`.
pub fn theta_mortality(params: &ModelParams, f: &FieldReaction, rho: f64, sigma: f64) -> f64 {
    if !(0.0..=1.0).contains(&sigma) {
        return f64::NAN;
    }
    let a = params.nu * rho * sigma / (params.mu + rho);
    a * a / (2.0 * params.d) - f.integral_to_one(sigma)
}

/// `θ(σ) = g(σ)² + 2d ∫_1^{G(σ)} f`, `G(σ) = (μσ - g(σ))/ν`; vanishes at the
/// road value of a stationary solution.
pub fn theta_general(params: &ModelParams, g: &RoadReaction, f: &FieldReaction, sigma: f64) -> f64 {
    let gs = g.eval(sigma);
    let big_g = (params.mu * sigma - gs) / params.nu;
    gs * gs - 2.0 * params.d * f.integral_to_one(big_g)
}

/// Monotone profile from `V(0) = v0` towards 1, integrating the first integral
/// `V' = sgn(1 - V) sqrt((2/d) ∫_V^1 f)` (the stable manifold of `V ≡ 1`).
fn relax_profile(
    params: &ModelParams,
    f: &FieldReaction,
    v0: f64,
    y_max: f64,
    dy: f64,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let d = params.d;
    let slope = |v: f64| {
        let e = (2.0 / d * f.integral_to_one(v)).max(0.0).sqrt();
        if v < 1.0 {
            e
        } else if v > 1.0 {
            -e
        } else {
            0.0
        }
    };
    let steps = (y_max / dy).ceil() as usize;
    let mut ys = Vec::with_capacity(steps / STORE_EVERY + 2);
    let mut vs = Vec::with_capacity(steps / STORE_EVERY + 2);
    let mut dvs = Vec::with_capacity(steps / STORE_EVERY + 2);
    let mut v = v0;
    ys.push(0.0);
    vs.push(v);
    dvs.push(slope(v));
    for k in 1..=steps {
        let k1 = slope(v);
        let k2 = slope(v + 0.5 * dy * k1);
        let k3 = slope(v + 0.5 * dy * k2);
        let k4 = slope(v + dy * k3);
        v += dy / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if k % STORE_EVERY == 0 || k == steps {
            ys.push(k as f64 * dy);
            vs.push(v);
            dvs.push(slope(v));
        }
    }
    (ys, vs, dvs)
}

fn assemble(
    params: &ModelParams,
    f: &FieldReaction,
    u: f64,
    v0: f64,
    v_prime_0: f64,
    minimal_candidate: bool,
) -> StationaryProfile {
    let (y, v, dv) = relax_profile(params, f, v0, default_y_max(params, f), DEFAULT_DY);
    let tail_residual = (v.last().unwrap() - 1.0).abs();
    StationaryProfile {
        u,
        v0,
        v_prime_0,
        y,
        v,
        dv,
        converged: tail_residual < CONVERGENCE_TOL,
        tail_residual,
        minimal_candidate,
    }
}

/// Root `σ₀ ∈ (0, 1]` of [`theta_mortality`], to machine precision.
pub fn mortality_root(params: &ModelParams, f: &FieldReaction, rho: f64) -> Result<f64> {
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(Error::invalid("rho", rho, "must be nonnegative and finite"));
    }
    let theta = |s: f64| theta_mortality(params, f, rho, s);
    let (t0, t1) = (theta(0.0), theta(1.0));
    if t1 == 0.0 {
        return Ok(1.0);
    }
    if !(t0 < 0.0 && t1 > 0.0) {
        return Err(Error::RootNotBracketed {
            what: "theta",
            lo: t0,
            hi: t1,
        });
    }
    Ok(bisect(&theta, 0.0, 1.0, 0.0))
}

/// Stationary solution for the mortality road `g(u) = -ρu` by the energy method.
pub fn stationary_mortality(
    params: &ModelParams,
    f: &FieldReaction,
    rho: f64,
) -> Result<StationaryProfile> {
    let sigma = mortality_root(params, f, rho)?;
    let u = params.nu * sigma / (params.mu + rho);
    let v_prime_0 = params.nu * rho * sigma / (params.d * (params.mu + rho));
    Ok(assemble(params, f, u, sigma, v_prime_0, false))
}

/// Whether the Liouville-type uniqueness results apply to this pair.
pub fn uniqueness_certified(params: &ModelParams, g: &RoadReaction, f: &FieldReaction) -> bool {
    if !g.concave() {
        return false;
    }
    let s_m = g.s_m();
    f.concave() || s_m <= (params.nu + g.eval(s_m)) / params.mu
}

/// `U* = inf { U > 0 : V_U > 0 on [0, ∞) }` by an upward scan followed by
/// bisection to `tol`, and the corresponding profile.
pub fn find_ustar(
    params: &ModelParams,
    g: &RoadReaction,
    f: &FieldReaction,
    tol: f64,
) -> Result<StationaryProfile> {
    check_positive("tol", tol)?;
    let s = g.s_point().or(g.s_star()).ok_or_else(|| Error::Bracket {
        what: "U*",
        detail: "no S > 0 with g(S) <= 0".into(),
    })?;
    let top = (params.nu / params.mu).max(s);
    let y_max = default_y_max(params, f);
    let member = |u: f64| -> Result<bool> {
        Ok(shoot(params, g, f, u, y_max, DEFAULT_DY)?.stays_positive())
    };

    let mut first = None;
    let mut interval = true;
    for k in 1..=SCAN_POINTS {
        let u = top * k as f64 / SCAN_POINTS as f64;
        let inside = member(u)?;
        match (first, inside) {
            (None, true) => first = Some(k),
            (Some(_), false) => interval = false,
            _ => {}
        }
    }
    let k = first.ok_or_else(|| Error::Bracket {
        what: "U*",
        detail: format!("no positive trajectory for U <= {top}"),
    })?;
    let mut hi = top * k as f64 / SCAN_POINTS as f64;
    let mut lo = top * (k - 1) as f64 / SCAN_POINTS as f64;
    if k == 1 {
        lo = hi;
        let mut halvings = 0;
        while member(lo)? {
            hi = lo;
            lo *= 0.5;
            halvings += 1;
            if halvings > 200 {
                return Err(Error::Bracket {
                    what: "U*",
                    detail: "every small U stays positive".into(),
                });
            }
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if member(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let u = hi;
    let gu = g.eval(u);
    let v0 = (params.mu * u - gu) / params.nu;
    let minimal = !interval || !uniqueness_certified(params, g, f);
    Ok(assemble(params, f, u, v0, -gu / params.d, minimal))
}

/// The stationary solution for `(g, f)`: the energy method when the road is a
/// pure mortality, shooting otherwise.
pub fn stationary_solution(
    params: &ModelParams,
    g: &RoadReaction,
    f: &FieldReaction,
) -> Result<StationaryProfile> {
    match g.rho() {
        Some(rho) => stationary_mortality(params, f, rho),
        None => find_ustar(params, g, f, 1e-12),
    }
}

/// Structural bounds on `(U, V)` in terms of `S* = inf { S > 0 : g(S) <= 0 }`:
/// `S* ≤ ν/μ ⇒ S* ≤ U ≤ ν/μ, V ≤ 1` and `S* ≥ ν/μ ⇒ ν/μ ≤ U ≤ S*, V ≥ 1`.
pub fn check_bounds(profile: &StationaryProfile, params: &ModelParams, g: &RoadReaction) -> bool {
    let Some(s_star) = g.s_star() else {
        return false;
    };
    let ratio = params.nu / params.mu;
    let tol = BOUNDS_TOL;
    let u = profile.u;
    let mut ok = true;
    if s_star <= ratio {
        ok &= s_star - tol <= u && u <= ratio + tol && profile.max_v() <= 1.0 + tol;
    }
    if s_star >= ratio {
        ok &= ratio - tol <= u && u <= s_star + tol && profile.min_v() >= 1.0 - tol;
    }
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn unit() -> ModelParams {
        ModelParams::new(1.0, 1.0, 1.0, 1.0, 0.0).unwrap()
    }

    fn logistic() -> FieldReaction {
        FieldReaction::logistic(1.0).unwrap()
    }

    #[test]
    fn theta_endpoints() {
        let p = unit();
        let f = logistic();
        assert_eq!(theta_mortality(&p, &f, 0.0, 1.0), 0.0);
        for &rho in &[0.0, 0.3, 1.0, 7.0] {
            assert!(theta_mortality(&p, &f, rho, 0.0) < 0.0);
            assert!(theta_mortality(&p, &f, rho, 1.0) >= 0.0);
        }
        assert!(theta_mortality(&p, &f, 1.0, 1.5).is_nan());
    }

    #[test]
    fn theta_closed_form_for_logistic() {
        let p = unit();
        let f = logistic();
        for &s in &[0.1, 0.4, 0.77, 1.0] {
            let expect = s * s / 8.0 - (1.0 / 6.0 - s * s / 2.0 + s * s * s / 3.0);
            assert!((theta_mortality(&p, &f, 1.0, s) - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn mortality_root_by_plain_bisection() {
        // σ²/8 - (1/6 - σ²/2 + σ³/3), bisected on its own
        let theta = |s: f64| s * s / 8.0 - (1.0 / 6.0 - s * s / 2.0 + s * s * s / 3.0);
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if theta(mid) < 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        let prof = stationary_mortality(&unit(), &logistic(), 1.0).unwrap();
        assert!((prof.v0 - hi).abs() < 1e-14);
        assert!((prof.u - hi / 2.0).abs() < 1e-14);
        assert!((prof.v_prime_0 - hi / 2.0).abs() < 1e-14);
    }

    #[test]
    fn mortality_profile_energy_identity() {
        let p = unit();
        let f = logistic();
        let prof = stationary_mortality(&p, &f, 1.0).unwrap();
        let lhs = f.integral(prof.v0, 1.0);
        assert!((lhs - 0.5 * p.d * prof.v_prime_0 * prof.v_prime_0).abs() < 1e-14);
        assert!((prof.dv[0] - prof.v_prime_0).abs() < 1e-10);
        assert!(prof.converged);
        assert!(prof.v.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn zero_mortality_is_flat() {
        let p = ModelParams::new(1.0, 1.0, 2.0, 1.0, 0.0).unwrap();
        let prof = stationary_mortality(&p, &logistic(), 0.0).unwrap();
        assert_eq!(prof.u, 0.5);
        assert_eq!(prof.v0, 1.0);
        assert!(prof.v.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn mortality_road_value_decreases_with_rho() {
        let us: Vec<f64> = [1.0, 10.0, 100.0]
            .iter()
            .map(|&rho| stationary_mortality(&unit(), &logistic(), rho).unwrap().u)
            .collect();
        assert!(us[0] > us[1] && us[1] > us[2]);
    }

    #[test]
    fn shoot_classifications() {
        let p = unit();
        let f = logistic();
        let mort = RoadReaction::mortality(1.0).unwrap();
        let small = shoot(&p, &mort, &f, 1e-3, 50.0, DEFAULT_DY).unwrap();
        assert_eq!(small.class, TrajectoryClass::HitsZero);
        let big = shoot(&p, &mort, &f, 1.0, 50.0, DEFAULT_DY).unwrap();
        assert!(big.stays_positive());

        let zero = RoadReaction::zero();
        let flat = shoot(&p, &zero, &f, 1.0, 50.0, DEFAULT_DY).unwrap();
        assert_eq!(flat.class, TrajectoryClass::PositiveBounded);
        assert!(flat.v.iter().all(|&v| v == 1.0));
        assert!(flat.w.iter().all(|&w| w == 0.0));
    }

    #[test]
    fn shoot_event_interpolated() {
        let p = unit();
        let t = shoot(
            &p,
            &RoadReaction::mortality(1.0).unwrap(),
            &logistic(),
            0.1,
            50.0,
            1e-3,
        )
        .unwrap();
        let y = t.event_y.unwrap();
        let n = t.v.len();
        assert!(y > t.y[n - 2] && y <= t.y[n - 1]);
    }

    #[test]
    fn shoot_energy_drift_small() {
        let p = unit();
        let t = shoot(
            &p,
            &RoadReaction::mortality(0.5).unwrap(),
            &logistic(),
            0.3,
            50.0,
            1e-3,
        )
        .unwrap();
        assert!(t.energy_drift < 1e-12, "{}", t.energy_drift);
    }

    #[test]
    fn shoot_rejects_bad_input() {
        let p = unit();
        let g = RoadReaction::zero();
        assert!(shoot(&p, &g, &logistic(), 0.0, 1.0, 1e-3).is_err());
        assert!(shoot(&p, &g, &logistic(), 1.0, -1.0, 1e-3).is_err());
        assert!(matches!(
            shoot(
                &p,
                &RoadReaction::mortality(1.0).unwrap(),
                &logistic(),
                0.4,
                50.0,
                1.5
            ),
            Err(Error::StepTooLarge { .. })
        ));
    }

    #[test]
    fn ustar_zero_road() {
        let p = ModelParams::new(1.0, 1.0, 2.0, 1.0, 0.0).unwrap();
        let prof = find_ustar(&p, &RoadReaction::zero(), &logistic(), 1e-13).unwrap();
        assert!((prof.u - 0.5).abs() < 1e-10);
        assert!((prof.v0 - 1.0).abs() < 1e-10);
        assert!(!prof.minimal_candidate);
    }

    #[test]
    fn ustar_matches_energy_root_for_mortality() {
        let p = unit();
        let f = logistic();
        for &rho in &[0.5, 1.0, 2.0] {
            let g = RoadReaction::mortality(rho).unwrap();
            let shot = find_ustar(&p, &g, &f, 1e-13).unwrap();
            let energy = stationary_mortality(&p, &f, rho).unwrap();
            assert!(
                (shot.u - energy.u).abs() < 1e-8,
                "rho={rho}: {} vs {}",
                shot.u,
                energy.u
            );
        }
    }

    #[test]
    fn theta_general_matches_mortality_form() {
        let p = ModelParams::new(0.7, 1.0, 1.3, 0.9, 0.0).unwrap();
        let f = logistic();
        let rho = 0.8;
        let g = RoadReaction::mortality(rho).unwrap();
        for &s in &[0.05, 0.2, 0.45, 0.6, 0.9] {
            let u = p.nu * s / (p.mu + rho);
            let a = theta_general(&p, &g, &f, u);
            let b = 2.0 * p.d * theta_mortality(&p, &f, rho, s);
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn theta_general_vanishes_on_flat_state() {
        let p = ModelParams::new(1.0, 1.0, 2.0, 1.0, 0.0).unwrap();
        assert_eq!(
            theta_general(&p, &RoadReaction::zero(), &logistic(), 0.5),
            0.0
        );
    }

    #[test]
    fn logistic_road_above_ratio() {
        let p = ModelParams::new(1.0, 1.0, 2.0, 1.0, 0.0).unwrap();
        let g = RoadReaction::logistic(1.0, 1.0).unwrap();
        let prof = find_ustar(&p, &g, &logistic(), 1e-13).unwrap();
        assert!(prof.u >= 0.5 && prof.u <= 1.0, "{}", prof.u);
        assert!(prof.min_v() >= 1.0 - 1e-12);
        assert!(check_bounds(&prof, &p, &g));
        assert!(theta_general(&p, &g, &logistic(), prof.u).abs() < 1e-6);
        assert!(!prof.minimal_candidate);
    }

    #[test]
    fn bounds_for_mortality() {
        let p = unit();
        let g = RoadReaction::mortality(1.0).unwrap();
        let prof = stationary_mortality(&p, &logistic(), 1.0).unwrap();
        assert!(check_bounds(&prof, &p, &g));
        let mut bad = prof.clone();
        bad.u = 1.5;
        assert!(!check_bounds(&bad, &p, &g));
    }

    #[test]
    fn flat_profile_passes_both_branches() {
        let p = unit();
        let prof = StationaryProfile::uniform(1.0, 1.0, 10.0);
        assert!(check_bounds(&prof, &p, &RoadReaction::zero()));
    }

    #[test]
    fn hermite_interpolation_recovers_profile() {
        let prof = stationary_mortality(&unit(), &logistic(), 1.0).unwrap();
        // midpoints against a fine re-integration on the stored grid
        for k in [3usize, 40, 400] {
            let y = 0.5 * (prof.y[k] + prof.y[k + 1]);
            let a = prof.v_at(y);
            assert!(a > prof.v[k] && a < prof.v[k + 1]);
        }
        assert_eq!(prof.v_at(-1.0), prof.v[0]);
        assert_eq!(prof.v_at(1e9), *prof.v.last().unwrap());
    }

    #[test]
    fn non_concave_road_flags_candidate() {
        let p = unit();
        let g = RoadReaction::custom(
            "bistable",
            Arc::new(|u: f64| u * (u - 0.2) * (1.0 - u)),
            -0.2,
            false,
        );
        let prof = find_ustar(&p, &g, &logistic(), 1e-12).unwrap();
        assert!(prof.minimal_candidate);
    }
}
