//! Parameters and reaction terms of the road–field system
//!
//! ```text
//! u_t - D u_xx + q u_x = nu v(x,0,t) - mu u + g(u)      on the road y = 0
//! v_t - d Δv           = f(v)                          in the field y > 0
//! -d v_y(x,0,t)        = mu u - nu v(x,0,t)             exchange condition
//! ```

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric::{adaptive_simpson, linspace};

/// Scalar nonlinearity supplied from outside the crate.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Default number of sample points used by the hypothesis checks.
pub const DEFAULT_SAMPLES: usize = 10_000;

const QUAD_TOL: f64 = 1e-13;

/// Physical constants of the coupled system.
///
/// `q` is the transport on the road as seen by propagation to the right; the
/// leftward speed uses `-q` (see [`ModelParams::oriented`]).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Field diffusivity `d`.
    pub d: f64,
    /// Road diffusivity `D`.
    pub big_d: f64,
    /// Rate `mu` at which individuals leave the road.
    pub mu: f64,
    /// Rate `nu` at which individuals join the road from the field.
    pub nu: f64,
    /// Road transport `q`.
    pub q: f64,
}

impl ModelParams {
    pub fn new(d: f64, big_d: f64, mu: f64, nu: f64, q: f64) -> Result<Self> {
        positive("d", d)?;
        positive("D", big_d)?;
        positive("mu", mu)?;
        positive("nu", nu)?;
        if !q.is_finite() {
            return Err(Error::invalid("q", q, "must be finite"));
        }
        Ok(ModelParams {
            d,
            big_d,
            mu,
            nu,
            q,
        })
    }

    /// Copy with the transport flipped for leftward propagation.
    pub fn oriented(&self, direction: Direction) -> Self {
        ModelParams {
            q: direction.sign() * self.q,
            ..*self
        }
    }

    pub fn with_big_d(&self, big_d: f64) -> Result<Self> {
        Self::new(self.d, big_d, self.mu, self.nu, self.q)
    }

    pub fn with_q(&self, q: f64) -> Result<Self> {
        Self::new(self.d, self.big_d, self.mu, self.nu, q)
    }

    /// `nu / mu`, the road density balancing a saturated field.
    pub fn exchange_ratio(&self) -> f64 {
        self.nu / self.mu
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, value, "must be positive and finite"))
    }
}

/// Propagation direction along the road.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Right,
    Left,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Right => 1.0,
            Direction::Left => -1.0,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Direction::Right => 1,
            Direction::Left => -1,
        }
    }

    pub fn from_sign(sign: i32) -> Option<Self> {
        match sign {
            1 => Some(Direction::Right),
            -1 => Some(Direction::Left),
            _ => None,
        }
    }
}

/// Classical KPP invasion speed `2 sqrt(d f'(0))`.
pub fn kpp_speed(d: f64, f_prime_0: f64) -> Result<f64> {
    positive("d", d)?;
    positive("f'(0)", f_prime_0)?;
    Ok(2.0 * (d * f_prime_0).sqrt())
}

/// Piecewise-linear interpolation through `(s, values)`, extended linearly
/// past both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub s: Vec<f64>,
    pub values: Vec<f64>,
}

impl Table {
    pub fn new(s: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if s.len() != values.len() || s.len() < 2 {
            return Err(Error::invalid(
                "samples",
                s.len() as f64,
                "need at least two (s, value) pairs of equal length",
            ));
        }
        if s[0] != 0.0 {
            return Err(Error::invalid(
                "samples",
                s[0],
                "first sample must be at s = 0",
            ));
        }
        if s.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(
                "samples",
                f64::NAN,
                "abscissae must increase",
            ));
        }
        Ok(Table { s, values })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.s.len();
        let k = match self.s.partition_point(|&si| si <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let (x0, x1) = (self.s[k], self.s[k + 1]);
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn initial_slope(&self) -> f64 {
        (self.values[1] - self.values[0]) / (self.s[1] - self.s[0])
    }

    pub fn last_abscissa(&self) -> f64 {
        *self.s.last().unwrap()
    }
}

#[derive(Clone)]
pub enum FieldKind {
    /// `f(s) = r s (1 - s)`.
    Logistic {
        r: f64,
    },
    Tabulated(Table),
    Custom {
        name: String,
        f: ScalarFn,
    },
}

impl fmt::Debug for FieldKind {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Logistic { r } => write!(fm, "Logistic {{ r: {r} }}"),
            FieldKind::Tabulated(t) => write!(fm, "Tabulated({} samples)", t.s.len()),
            FieldKind::Custom { name, .. } => write!(fm, "Custom({name})"),
        }
    }
}

/// KPP nonlinearity `f` in the field.
#[derive(Clone, Debug)]
pub struct FieldReaction {
    kind: FieldKind,
    f_prime_0: f64,
    concave: bool,
}

impl FieldReaction {
    pub fn logistic(r: f64) -> Result<Self> {
        positive("r", r)?;
        Ok(FieldReaction {
            kind: FieldKind::Logistic { r },
            f_prime_0: r,
            concave: true,
        })
    }

    /// Piecewise-linear `f` through user samples. `f'(0)` is the slope of the
    /// first segment.
    pub fn tabulated(s: Vec<f64>, values: Vec<f64>, concave: bool) -> Result<Self> {
        let table = Table::new(s, values)?;
        let f_prime_0 = table.initial_slope();
        Ok(FieldReaction {
            kind: FieldKind::Tabulated(table),
            f_prime_0,
            concave,
        })
    }

    pub fn custom(name: impl Into<String>, f: ScalarFn, f_prime_0: f64, concave: bool) -> Self {
        FieldReaction {
            kind: FieldKind::Custom {
                name: name.into(),
                f,
            },
            f_prime_0,
            concave,
        }
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn f_prime_0(&self) -> f64 {
        self.f_prime_0
    }

    /// Whether `s -> f(s)/s` is claimed nonincreasing.
    pub fn concave(&self) -> bool {
        self.concave
    }

    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        match &self.kind {
            FieldKind::Logistic { r } => r * s * (1.0 - s),
            FieldKind::Tabulated(t) => t.eval(s),
            FieldKind::Custom { f, .. } => f(s),
        }
    }

    /// `f(s)/s`, continued by `f'(0)` at the origin.
    #[inline]
    pub fn per_capita(&self, s: f64) -> f64 {
        match &self.kind {
            FieldKind::Logistic { r } => r * (1.0 - s),
            _ if s == 0.0 => self.f_prime_0,
            _ => self.eval(s) / s,
        }
    }

    /// `∫_a^b f(s) ds`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        match &self.kind {
            FieldKind::Logistic { r } => {
                let p = |s: f64| s * s * (0.5 - s / 3.0);
                r * (p(b) - p(a))
            }
            _ => adaptive_simpson(&|s| self.eval(s), a, b, QUAD_TOL),
        }
    }

    /// `∫_v^1 f(s) ds`, written to stay accurate as `v -> 1`.
    pub fn integral_to_one(&self, v: f64) -> f64 {
        match &self.kind {
            FieldKind::Logistic { r } => {
                let w = 1.0 - v;
                r * w * w * (1.0 + 2.0 * v) / 6.0
            }
            _ => self.integral(v, 1.0),
        }
    }

    /// `sup max(0, -f')` over `[0, m]`; enters the monotonicity time-step bound.
    pub fn max_decay_rate(&self, m: f64) -> f64 {
        match &self.kind {
            FieldKind::Logistic { r } => (r * (2.0 * m - 1.0)).max(0.0),
            _ => sampled_decay_rate(|s| self.eval(s), m),
        }
    }
}

fn sampled_decay_rate(g: impl Fn(f64) -> f64, m: f64) -> f64 {
    let grid = linspace(0.0, m.max(1e-12), 2001);
    grid.windows(2)
        .map(|w| -(g(w[1]) - g(w[0])) / (w[1] - w[0]))
        .fold(0.0, f64::max)
}

#[derive(Clone)]
pub enum RoadKind {
    Zero,
    /// `g(u) = -rho u`.
    Mortality {
        rho: f64,
    },
    /// `g(u) = slope u (1 - u / kappa)`.
    Logistic {
        slope: f64,
        kappa: f64,
    },
    Tabulated(Table),
    Custom {
        name: String,
        g: ScalarFn,
    },
}

impl fmt::Debug for RoadKind {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoadKind::Zero => write!(fm, "Zero"),
            RoadKind::Mortality { rho } => write!(fm, "Mortality {{ rho: {rho} }}"),
            RoadKind::Logistic { slope, kappa } => {
                write!(fm, "Logistic {{ slope: {slope}, kappa: {kappa} }}")
            }
            RoadKind::Tabulated(t) => write!(fm, "Tabulated({} samples)", t.s.len()),
            RoadKind::Custom { name, .. } => write!(fm, "Custom({name})"),
        }
    }
}

/// Reaction `g` on the road together with its structural constants.
#[derive(Clone, Debug)]
pub struct RoadReaction {
    kind: RoadKind,
    g_prime_0: f64,
    /// Some point `S > 0` with `g(S) <= 0`, if one was found.
    s_point: Option<f64>,
    /// `inf { S > 0 : g(S) <= 0 }`.
    s_star: Option<f64>,
    /// `min { s >= 0 : g' <= 0 on [s, inf) }`.
    s_m: f64,
    concave: bool,
}

impl RoadReaction {
    pub fn zero() -> Self {
        RoadReaction {
            kind: RoadKind::Zero,
            g_prime_0: 0.0,
            s_point: Some(1.0),
            s_star: Some(0.0),
            s_m: 0.0,
            concave: true,
        }
    }

    pub fn mortality(rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho >= 0.0) {
            return Err(Error::invalid("rho", rho, "must be nonnegative and finite"));
        }
        Ok(RoadReaction {
            kind: RoadKind::Mortality { rho },
            g_prime_0: -rho,
            s_point: Some(1.0),
            s_star: Some(0.0),
            s_m: 0.0,
            concave: true,
        })
    }

    pub fn logistic(slope: f64, kappa: f64) -> Result<Self> {
        if !(slope.is_finite() && slope >= 0.0) {
            return Err(Error::invalid("s", slope, "must be nonnegative and finite"));
        }
        positive("kappa", kappa)?;
        if slope == 0.0 {
            return Ok(Self::zero());
        }
        Ok(RoadReaction {
            kind: RoadKind::Logistic { slope, kappa },
            g_prime_0: slope,
            s_point: Some(kappa),
            s_star: Some(kappa),
            s_m: 0.5 * kappa,
            concave: true,
        })
    }

    /// Piecewise-linear `g` through user samples; `S*` and `S_M` are located
    /// on the sample abscissae.
    pub fn tabulated(s: Vec<f64>, values: Vec<f64>, concave: bool) -> Result<Self> {
        let table = Table::new(s, values)?;
        let g_prime_0 = table.initial_slope();
        let hi = table.last_abscissa().max(2.0);
        let t = table.clone();
        let (s_star, s_m) = scan_structure(&|u| t.eval(u), hi, DEFAULT_SAMPLES);
        Ok(RoadReaction {
            kind: RoadKind::Tabulated(table),
            g_prime_0,
            s_point: s_star.map(|v| v.max(hi / DEFAULT_SAMPLES as f64)),
            s_star,
            s_m,
            concave,
        })
    }

    pub fn custom(name: impl Into<String>, g: ScalarFn, g_prime_0: f64, concave: bool) -> Self {
        let mut hi = 2.0;
        let (mut s_star, mut s_m) = scan_structure(&|u| g(u), hi, DEFAULT_SAMPLES);
        while s_star.is_none() && hi < 1024.0 {
            hi *= 2.0;
            (s_star, s_m) = scan_structure(&|u| g(u), hi, DEFAULT_SAMPLES);
        }
        RoadReaction {
            kind: RoadKind::Custom {
                name: name.into(),
                g,
            },
            g_prime_0,
            s_point: s_star.map(|v| v.max(hi / DEFAULT_SAMPLES as f64)),
            s_star,
            s_m,
            concave,
        }
    }

    pub fn kind(&self) -> &RoadKind {
        &self.kind
    }

    pub fn g_prime_0(&self) -> f64 {
        self.g_prime_0
    }

    /// The mortality rate when `g(u) = -rho u`.
    pub fn rho(&self) -> Option<f64> {
        match self.kind {
            RoadKind::Mortality { rho } => Some(rho),
            RoadKind::Zero => Some(0.0),
            _ => None,
        }
    }

    pub fn s_point(&self) -> Option<f64> {
        self.s_point
    }

    pub fn s_star(&self) -> Option<f64> {
        self.s_star
    }

    pub fn s_m(&self) -> f64 {
        self.s_m
    }

    pub fn concave(&self) -> bool {
        self.concave
    }

    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        match &self.kind {
            RoadKind::Zero => 0.0,
            RoadKind::Mortality { rho } => -rho * u,
            RoadKind::Logistic { slope, kappa } => slope * u * (1.0 - u / kappa),
            RoadKind::Tabulated(t) => t.eval(u),
            RoadKind::Custom { g, .. } => g(u),
        }
    }

    /// `g(u)/u`, continued by `g'(0)` at the origin.
    #[inline]
    pub fn per_capita(&self, u: f64) -> f64 {
        match &self.kind {
            RoadKind::Zero => 0.0,
            RoadKind::Mortality { rho } => -rho,
            RoadKind::Logistic { slope, kappa } => slope * (1.0 - u / kappa),
            _ if u == 0.0 => self.g_prime_0,
            _ => self.eval(u) / u,
        }
    }

    /// `sup max(0, -g')` over `[0, m]`.
    pub fn max_decay_rate(&self, m: f64) -> f64 {
        match &self.kind {
            RoadKind::Zero => 0.0,
            RoadKind::Mortality { rho } => *rho,
            RoadKind::Logistic { slope, kappa } => (slope * (2.0 * m / kappa - 1.0)).max(0.0),
            _ => sampled_decay_rate(|s| self.eval(s), m),
        }
    }
}

/// Locate `S*` and `S_M` of a sampled `g` on `[0, hi]`, refining each to
/// machine precision between the bracketing samples.
fn scan_structure(g: &dyn Fn(f64) -> f64, hi: f64, n: usize) -> (Option<f64>, f64) {
    let grid = linspace(0.0, hi, n);
    let s_star = grid
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, &s)| g(s) <= 0.0)
        .map(|(k, &s)| {
            if k == 1 {
                0.0
            } else {
                crate::numeric::bisect(&|x| -g(x), grid[k - 1], s, 0.0)
            }
        });

    let h = hi / (n - 1) as f64;
    let fd = 1e-6 * h.max(1e-12);
    let deriv = |s: f64| (g(s + fd) - g((s - fd).max(0.0))) / (s + fd - (s - fd).max(0.0));
    let last_rising = grid
        .iter()
        .rposition(|&s| deriv(s) > 1e-9 * (1.0 + g(s).abs()));
    let s_m = match last_rising {
        None => 0.0,
        Some(k) if k + 1 >= grid.len() => hi,
        Some(k) => crate::numeric::bisect(&|x| -deriv(x), grid[k], grid[k + 1], 0.0),
    };
    (s_star, s_m)
}

/// Outcome of one sampled hypothesis check.
#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub passed: bool,
    /// First sample point where the check failed.
    pub first_violation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    pub checks: Vec<HypothesisCheck>,
    /// Computed `S*` (road only).
    pub s_star: Option<f64>,
    /// Computed `S_M` (road only).
    pub s_m: Option<f64>,
    /// Spacing of the sample grid; sampled constants are exact only to this.
    pub resolution: f64,
}

impl Diagnostics {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&HypothesisCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.check(name).is_some_and(|c| c.passed)
    }
}

pub const CHECK_F_ZERO: &str = "f(0)=0";
pub const CHECK_F_ONE: &str = "f(1)=0";
pub const CHECK_F_POSITIVE: &str = "f>0 in (0,1)";
pub const CHECK_F_NEGATIVE: &str = "f<0 in (1,inf)";
pub const CHECK_F_KPP: &str = "f(s)<=f'(0)s";
pub const CHECK_F_CONCAVE: &str = "f(s)/s nonincreasing";
pub const CHECK_G_ZERO: &str = "g(0)=0";
pub const CHECK_G_SIGN: &str = "exists S>0 with g(S)<=0";
pub const CHECK_G_CONCAVE: &str = "g(s)/s nonincreasing";

fn first_failure(grid: &[f64], ok: impl Fn(f64) -> bool) -> Option<f64> {
    grid.iter().copied().find(|&s| !ok(s))
}

fn check(name: &'static str, first_violation: Option<f64>) -> HypothesisCheck {
    HypothesisCheck {
        name,
        passed: first_violation.is_none(),
        first_violation,
    }
}

fn nonincreasing_ratio(grid: &[f64], ratio: impl Fn(f64) -> f64) -> Option<f64> {
    let interior: Vec<f64> = grid.iter().copied().filter(|&s| s > 0.0).collect();
    interior.windows(2).find_map(|w| {
        let (a, b) = (ratio(w[0]), ratio(w[1]));
        (b > a + 1e-12 * (1.0 + a.abs())).then_some(w[1])
    })
}

/// Check the KPP hypotheses on `f` over a uniform grid on `[0, 2]`.
pub fn validate_field_reaction(f: &FieldReaction, n_samples: usize) -> Result<Diagnostics> {
    if n_samples < 10 {
        return Err(Error::invalid(
            "n_samples",
            n_samples as f64,
            "need at least 10",
        ));
    }
    let hi = 2.0;
    let grid = linspace(0.0, hi, n_samples);
    let eps = |x: f64| 1e-12 * (1.0 + x.abs());
    let fp0 = f.f_prime_0();

    let mut checks = vec![
        check(CHECK_F_ZERO, (f.eval(0.0).abs() > 1e-12).then_some(0.0)),
        check(CHECK_F_ONE, (f.eval(1.0).abs() > 1e-12).then_some(1.0)),
        check(
            CHECK_F_POSITIVE,
            first_failure(&grid, |s| s <= 0.0 || s >= 1.0 || f.eval(s) > 0.0),
        ),
        check(
            CHECK_F_NEGATIVE,
            first_failure(&grid, |s| s <= 1.0 || f.eval(s) < 0.0),
        ),
        check(
            CHECK_F_KPP,
            first_failure(&grid, |s| s <= 0.0 || f.eval(s) <= fp0 * s + eps(fp0 * s)),
        ),
    ];
    if f.concave() {
        checks.push(check(
            CHECK_F_CONCAVE,
            nonincreasing_ratio(&grid, |s| f.eval(s) / s),
        ));
    }
    Ok(Diagnostics {
        checks,
        s_star: None,
        s_m: None,
        resolution: hi / (n_samples - 1) as f64,
    })
}

/// Check the road hypotheses on `g` over a uniform grid on `[0, max(2, S)]`,
/// and locate `S*` and `S_M` on that grid.
pub fn validate_road_reaction(g: &RoadReaction, n_samples: usize) -> Result<Diagnostics> {
    if n_samples < 10 {
        return Err(Error::invalid(
            "n_samples",
            n_samples as f64,
            "need at least 10",
        ));
    }
    let hi = g.s_point().unwrap_or(0.0).max(2.0);
    let grid = linspace(0.0, hi, n_samples);

    let mut checks = vec![
        check(CHECK_G_ZERO, (g.eval(0.0).abs() > 1e-12).then_some(0.0)),
        HypothesisCheck {
            name: CHECK_G_SIGN,
            passed: grid.iter().any(|&s| s > 0.0 && g.eval(s) <= 0.0),
            first_violation: None,
        },
    ];
    if g.concave() {
        checks.push(check(
            CHECK_G_CONCAVE,
            nonincreasing_ratio(&grid, |s| g.eval(s) / s),
        ));
    }
    let (s_star, s_m) = scan_structure(&|u| g.eval(u), hi, n_samples);
    Ok(Diagnostics {
        checks,
        s_star,
        s_m: Some(s_m),
        resolution: hi / (n_samples - 1) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::new(1.0, 2.0, 1.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn constructor_rejects_nonpositive() {
        assert!(ModelParams::new(0.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, -1.0, 1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, -2.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, 1.0, f64::NAN).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, 1.0, -3.0).is_ok());
    }

    #[test]
    fn orientation_flips_transport() {
        let p = params().with_q(1.5).unwrap();
        assert_eq!(p.oriented(Direction::Left).q, -1.5);
        assert_eq!(p.oriented(Direction::Right).q, 1.5);
    }

    #[test]
    fn kpp_speed_values() {
        assert_eq!(kpp_speed(1.0, 1.0).unwrap(), 2.0);
        assert_eq!(kpp_speed(4.0, 1.0).unwrap(), 4.0);
        assert_eq!(kpp_speed(2.0, 0.5).unwrap(), 2.0);
        assert!(kpp_speed(0.0, 1.0).is_err());
        assert!(kpp_speed(1.0, -1.0).is_err());
    }

    #[test]
    fn logistic_field_passes_everything() {
        let f = FieldReaction::logistic(1.0).unwrap();
        let diag = validate_field_reaction(&f, 1000).unwrap();
        assert!(diag.all_passed(), "{diag:?}");
        assert!(diag.check(CHECK_F_CONCAVE).is_some());
    }

    #[test]
    fn non_concave_field_is_flagged() {
        // f/s = (1-s)(1+5s): 1.35 at s = 0.1, 1.75 at s = 0.3
        let f = FieldReaction::custom(
            "cubic",
            Arc::new(|s: f64| s * (1.0 - s) * (1.0 + 5.0 * s)),
            1.0,
            true,
        );
        assert!((f.per_capita(0.1) - 1.35).abs() < 1e-12);
        assert!((f.per_capita(0.3) - 1.75).abs() < 1e-12);
        let diag = validate_field_reaction(&f, 1000).unwrap();
        assert!(!diag.passed(CHECK_F_CONCAVE));
        assert!(
            diag.check(CHECK_F_CONCAVE)
                .unwrap()
                .first_violation
                .unwrap()
                < 0.1
        );
    }

    #[test]
    fn zero_field_fails_positivity() {
        let f = FieldReaction::custom("zero", Arc::new(|_| 0.0), 1.0, false);
        let diag = validate_field_reaction(&f, 100).unwrap();
        assert!(!diag.passed(CHECK_F_POSITIVE));
        assert!(diag.check(CHECK_F_CONCAVE).is_none());
    }

    #[test]
    fn too_few_samples_rejected() {
        let f = FieldReaction::logistic(1.0).unwrap();
        assert!(validate_field_reaction(&f, 9).is_err());
        assert!(validate_road_reaction(&RoadReaction::zero(), 5).is_err());
    }

    #[test]
    fn mortality_road_constants() {
        let g = RoadReaction::mortality(1.0).unwrap();
        assert_eq!(g.g_prime_0(), -1.0);
        let diag = validate_road_reaction(&g, DEFAULT_SAMPLES).unwrap();
        assert!(diag.all_passed());
        assert_eq!(diag.s_star, Some(0.0));
        assert_eq!(diag.s_m, Some(0.0));
        assert_eq!(g.s_star(), Some(0.0));
        assert_eq!(g.s_m(), 0.0);
    }

    #[test]
    fn logistic_road_constants_sampled() {
        // g' = 1 - 2u vanishes at 1/2, g vanishes at 1
        let g = RoadReaction::custom("u(1-u)", Arc::new(|u: f64| u * (1.0 - u)), 1.0, true);
        let diag = validate_road_reaction(&g, DEFAULT_SAMPLES).unwrap();
        assert!(diag.all_passed(), "{diag:?}");
        assert!((diag.s_star.unwrap() - 1.0).abs() < 1e-9);
        assert!((diag.s_m.unwrap() - 0.5).abs() < 1e-6);

        let builtin = RoadReaction::logistic(1.0, 1.0).unwrap();
        assert_eq!(builtin.s_star(), Some(1.0));
        assert_eq!(builtin.s_m(), 0.5);
        let diag = validate_road_reaction(&builtin, DEFAULT_SAMPLES).unwrap();
        assert!((diag.s_star.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn growing_road_fails_sign_hypothesis() {
        let g = RoadReaction::custom("u", Arc::new(|u: f64| u), 1.0, false);
        assert_eq!(g.s_star(), None);
        let diag = validate_road_reaction(&g, 1000).unwrap();
        assert!(!diag.passed(CHECK_G_SIGN));
    }

    #[test]
    fn tabulated_matches_builtin() {
        let s = linspace(0.0, 2.0, 2001);
        let vals: Vec<f64> = s.iter().map(|&x| x * (1.0 - x)).collect();
        let f = FieldReaction::tabulated(s.clone(), vals.clone(), true).unwrap();
        assert!((f.f_prime_0() - 1.0).abs() < 1e-3);
        assert!((f.eval(0.37) - 0.37 * 0.63).abs() < 1e-6);
        assert!((f.integral_to_one(0.0) - 1.0 / 6.0).abs() < 1e-6);
        let g = RoadReaction::tabulated(s, vals, true).unwrap();
        assert!((g.s_star().unwrap() - 1.0).abs() < 1e-9);
        assert!((g.s_m() - 0.5).abs() < 2e-3);
    }

    #[test]
    fn logistic_integrals_agree_with_quadrature() {
        let f = FieldReaction::logistic(1.7).unwrap();
        for &v in &[0.0, 0.2, 0.9, 0.999, 1.3] {
            let q = adaptive_simpson(&|s| f.eval(s), v, 1.0, 1e-14);
            assert!((f.integral_to_one(v) - q).abs() < 1e-13);
            assert!((f.integral(v, 1.0) - q).abs() < 1e-13);
        }
    }

    #[test]
    fn per_capita_continuous_at_zero() {
        let g = RoadReaction::custom("u(1-u)", Arc::new(|u: f64| u * (1.0 - u)), 1.0, true);
        assert_eq!(g.per_capita(0.0), 1.0);
        assert!((g.per_capita(1e-9) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn decay_rates() {
        let f = FieldReaction::logistic(1.0).unwrap();
        assert_eq!(f.max_decay_rate(2.0), 3.0);
        let g = RoadReaction::mortality(0.7).unwrap();
        assert_eq!(g.max_decay_rate(5.0), 0.7);
        let c = FieldReaction::custom("log", Arc::new(|s: f64| s * (1.0 - s)), 1.0, true);
        assert!((c.max_decay_rate(2.0) - 3.0).abs() < 1e-2);
    }

    proptest::proptest! {
        #[test]
        fn kpp_speed_scales(d in 0.01f64..10.0, fp in 0.01f64..10.0, lam in 0.1f64..10.0) {
            let a = kpp_speed(lam * lam * d, fp).unwrap();
            let b = lam * kpp_speed(d, fp).unwrap();
            proptest::prop_assert!((a - b).abs() <= 1e-12 * b);
        }
    }
}
