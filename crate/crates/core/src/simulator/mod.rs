//! Finite-difference simulation of the road–field system on
//! `[-Lx, Lx] × [0, Ly]`, with homogeneous Neumann conditions on the
//! artificial boundaries and the exchange condition at `y = 0`.
//!
//! The road front is tracked as the outermost crossings of `level · U`,
//! `U` being the road value of the stationary solution.

mod scheme;

pub use scheme::{StepBounds, Stepper, BLOWUP, FLUSH_BELOW, SAFETY};

use crate::error::{Error, Result};
use crate::model::{FieldReaction, ModelParams, RoadReaction};
use crate::stationary::{stationary_solution, StationaryProfile};

/// Minimum distance (in cells) between a front and the lateral boundary
/// before a warning is raised.
pub const GUARD_CELLS: f64 = 10.0;
/// Default fraction of the series used by [`estimate_speed`].
pub const DEFAULT_FIT_WINDOW: f64 = 0.5;

/// Truncated domain and time discretisation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub lx: f64,
    pub ly: f64,
    pub dx: f64,
    pub dy: f64,
    /// Field time step; `None` picks the largest monotone step.
    pub dt: Option<f64>,
    pub t_final: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::desk()
    }
}

impl GridSpec {
    /// `dx = dy = 0.25`, `Lx = 400`, `Ly = 40`, `T = 150`.
    pub fn desk() -> Self {
        GridSpec {
            lx: 400.0,
            ly: 40.0,
            dx: 0.25,
            dy: 0.25,
            dt: None,
            t_final: 150.0,
        }
    }

    fn cells(len: f64, h: f64, name: &'static str) -> Result<usize> {
        let n = len / h;
        if !(n.is_finite() && n >= 1.0) || (n - n.round()).abs() > 1e-9 * n.max(1.0) {
            return Err(Error::invalid(
                name,
                h,
                "must divide the domain into whole cells",
            ));
        }
        Ok(n.round() as usize)
    }

    /// `(nx, ny)`: points on `[-Lx, Lx]` and on `[0, Ly]`.
    pub fn shape(&self) -> Result<(usize, usize)> {
        for (name, x) in [
            ("lx", self.lx),
            ("ly", self.ly),
            ("dx", self.dx),
            ("dy", self.dy),
        ] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::invalid(name, x, "must be positive and finite"));
            }
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::invalid(
                "t_final",
                self.t_final,
                "must be nonnegative",
            ));
        }
        let nx = 2 * Self::cells(self.lx, self.dx, "dx")? + 1;
        let ny = Self::cells(self.ly, self.dy, "dy")? + 1;
        Ok((nx, ny))
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        -self.lx + i as f64 * self.dx
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.dy
    }

    /// Monotone step bounds for data bounded by `(m_u, m_v)`.
    pub fn step_bounds(
        &self,
        params: &ModelParams,
        f: &FieldReaction,
        g: &RoadReaction,
        m_u: f64,
        m_v: f64,
    ) -> StepBounds {
        StepBounds::new(params, f, g, self, m_u, m_v)
    }
}

/// Road density on the x-grid and field density on the (x, y)-grid,
/// stored row by row in `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimState {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub t: f64,
    pub nx: usize,
    pub ny: usize,
}

impl SimState {
    pub fn zeros(grid: &GridSpec) -> Result<Self> {
        let (nx, ny) = grid.shape()?;
        Ok(SimState {
            u: vec![0.0; nx],
            v: vec![0.0; nx * ny],
            t: 0.0,
            nx,
            ny,
        })
    }

    #[inline]
    pub fn v_at(&self, i: usize, j: usize) -> f64 {
        self.v[j * self.nx + i]
    }

    pub fn v_row(&self, j: usize) -> &[f64] {
        &self.v[j * self.nx..(j + 1) * self.nx]
    }

    pub fn u_max(&self) -> f64 {
        self.u.iter().copied().fold(0.0, f64::max)
    }

    pub fn v_max(&self) -> f64 {
        self.v.iter().copied().fold(0.0, f64::max)
    }

    /// `∫u dx + ∫∫v dx dy`, trapezoidal in `y`.
    pub fn mass(&self, grid: &GridSpec) -> f64 {
        let road: f64 = self.u.iter().sum::<f64>() * grid.dx;
        let mut field = 0.0;
        for j in 0..self.ny {
            let w = if j == 0 || j == self.ny - 1 { 0.5 } else { 1.0 };
            field += w * self.v_row(j).iter().sum::<f64>();
        }
        road + field * grid.dx * grid.dy
    }

    /// First non-finite or oversized value, if any.
    pub fn instability(&self) -> Option<String> {
        let bad = |x: &f64| !x.is_finite() || x.abs() > BLOWUP;
        if let Some(i) = self.u.iter().position(bad) {
            return Some(format!("u[{i}] = {}", self.u[i]));
        }
        self.v
            .iter()
            .position(bad)
            .map(|k| format!("v[{}, {}] = {}", k % self.nx, k / self.nx, self.v[k]))
    }
}

/// Initial condition of a run.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialData {
    /// `u₀ = height · 1_{|x| ≤ half_width}`, `v₀ = 0`.
    Bump { half_width: f64, height: f64 },
    /// Uniform `(u, v)`.
    Constant { u: f64, v: f64 },
    /// The stationary solution, extended uniformly in `x`.
    Stationary,
    /// Explicit arrays matching the grid.
    Arrays { u: Vec<f64>, v: Vec<f64> },
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::Bump {
            half_width: 1.0,
            height: 1.0,
        }
    }
}

impl InitialData {
    pub fn build(&self, grid: &GridSpec, reference: &StationaryProfile) -> Result<SimState> {
        let mut s = SimState::zeros(grid)?;
        match self {
            InitialData::Bump { half_width, height } => {
                if !(*height >= 0.0) {
                    return Err(Error::invalid("height", *height, "must be nonnegative"));
                }
                for i in 0..s.nx {
                    if grid.x(i).abs() <= half_width + 1e-9 * grid.dx {
                        s.u[i] = *height;
                    }
                }
            }
            InitialData::Constant { u, v } => {
                if !(*u >= 0.0 && *v >= 0.0) {
                    return Err(Error::invalid("initial", u.min(*v), "must be nonnegative"));
                }
                s.u.fill(*u);
                s.v.fill(*v);
            }
            InitialData::Stationary => {
                s.u.fill(reference.u);
                for j in 0..s.ny {
                    let vj = reference.v_at(grid.y(j));
                    s.v[j * s.nx..(j + 1) * s.nx].fill(vj);
                }
            }
            InitialData::Arrays { u, v } => {
                if u.len() != s.nx || v.len() != s.nx * s.ny {
                    return Err(Error::Config {
                        line: 0,
                        message: format!(
                            "initial arrays have {} and {} entries, grid needs {} and {}",
                            u.len(),
                            v.len(),
                            s.nx,
                            s.nx * s.ny
                        ),
                    });
                }
                if u.iter()
                    .chain(v.iter())
                    .any(|x| !(*x >= 0.0) || !x.is_finite())
                {
                    return Err(Error::invalid("initial", f64::NAN, "must be nonnegative"));
                }
                s.u.copy_from_slice(u);
                s.v.copy_from_slice(v);
            }
        }
        Ok(s)
    }
}

/// A priori bounds `(Mν, Mμ)` of the constant supersolution above the data:
/// `M ≥ max(1/μ, S/ν, ‖u₀‖/ν, ‖v₀‖/μ)`.
pub fn trapping_bounds(params: &ModelParams, g: &RoadReaction, state: &SimState) -> (f64, f64) {
    let s = g.s_point().unwrap_or(0.0);
    let m = (1.0 / params.mu)
        .max(s / params.nu)
        .max(state.u_max() / params.nu)
        .max(state.v_max() / params.mu);
    (m * params.nu, m * params.mu)
}

/// One explicit step of the largest monotone size.
pub fn step(
    state: &SimState,
    params: &ModelParams,
    f: &FieldReaction,
    g: &RoadReaction,
    grid: &GridSpec,
) -> Result<SimState> {
    let (m_u, m_v) = trapping_bounds(params, g, state);
    let bounds = grid.step_bounds(params, f, g, m_u, m_v);
    let dt = match grid.dt {
        Some(dt) if dt > bounds.field => {
            return Err(Error::Unstable {
                dt,
                bound: bounds.field,
            })
        }
        Some(dt) => dt,
        None => bounds.field,
    };
    let mut stepper = Stepper::new(params, f, g, grid, bounds)?;
    let mut next = state.clone();
    stepper.advance(&mut next, dt)?;
    if let Some(detail) = next.instability() {
        return Err(Error::Instability { t: next.t, detail });
    }
    Ok(next)
}

/// Everything needed for one simulation.
#[derive(Clone, Debug)]
pub struct SimConfig {
    pub params: ModelParams,
    pub f: FieldReaction,
    pub g: RoadReaction,
    pub grid: GridSpec,
    pub record_every: f64,
    /// Front threshold as a fraction of the stationary road value.
    pub level: f64,
    pub initial: InitialData,
    /// Times at which the state is kept; rounded up to the recording grid.
    pub snapshots: Vec<f64>,
}

impl SimConfig {
    pub fn new(params: ModelParams, f: FieldReaction, g: RoadReaction, grid: GridSpec) -> Self {
        SimConfig {
            params,
            f,
            g,
            grid,
            record_every: 1.0,
            level: 0.5,
            initial: InitialData::default(),
            snapshots: Vec::new(),
        }
    }
}

/// Recorded front positions and summary quantities.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FrontSeries {
    pub times: Vec<f64>,
    /// NaN while no front exists.
    pub x_plus: Vec<f64>,
    pub x_minus: Vec<f64>,
    pub u_max: Vec<f64>,
    pub mass: Vec<f64>,
    pub level: f64,
    /// `level · U`.
    pub threshold: f64,
}

impl FrontSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    fn push(&mut self, t: f64, fronts: Option<(f64, f64)>, u_max: f64, mass: f64) {
        let (p, m) = fronts.unwrap_or((f64::NAN, f64::NAN));
        self.times.push(t);
        self.x_plus.push(p);
        self.x_minus.push(m);
        self.u_max.push(u_max);
        self.mass.push(mass);
    }
}

/// Result of [`run`].
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub state: SimState,
    pub series: FrontSeries,
    pub snapshots: Vec<SimState>,
    pub reference: StationaryProfile,
    pub warnings: Vec<String>,
    pub dt: f64,
    pub road_substeps: usize,
    pub steps: usize,
}

/// Rightmost and leftmost crossings of `level · reference.u` by the road
/// density, linearly interpolated between grid points.
pub fn front_position(
    state: &SimState,
    grid: &GridSpec,
    level: f64,
    reference: &StationaryProfile,
) -> Result<(f64, f64)> {
    if !(reference.u > 0.0) {
        return Err(Error::invalid(
            "U",
            reference.u,
            "reference must be positive",
        ));
    }
    front_crossings(&state.u, grid, level * reference.u)
}

fn front_crossings(u: &[f64], grid: &GridSpec, threshold: f64) -> Result<(f64, f64)> {
    let n = u.len();
    let right = u
        .iter()
        .rposition(|&x| x >= threshold)
        .ok_or(Error::NoFront { threshold })?;
    let left = u.iter().position(|&x| x >= threshold).unwrap_or(right);
    let plus = if right + 1 == n {
        grid.x(right)
    } else {
        let (a, b) = (u[right], u[right + 1]);
        grid.x(right) + grid.dx * (a - threshold) / (a - b)
    };
    let minus = if left == 0 {
        grid.x(0)
    } else {
        let (a, b) = (u[left], u[left - 1]);
        grid.x(left) - grid.dx * (a - threshold) / (a - b)
    };
    Ok((plus, minus))
}

/// Integrate the configured problem to `T`, recording fronts every
/// `record_every`.
pub fn run(config: &SimConfig) -> Result<RunOutput> {
    let SimConfig {
        params,
        f,
        g,
        grid,
        record_every,
        level,
        ..
    } = config;
    if !(*record_every > 0.0 && record_every.is_finite()) {
        return Err(Error::invalid(
            "record_every",
            *record_every,
            "must be positive",
        ));
    }
    if !(*level > 0.0 && *level < 1.0) {
        return Err(Error::invalid("level", *level, "must lie in (0, 1)"));
    }
    let reference = stationary_solution(params, g, f)?;
    let mut state = config.initial.build(grid, &reference)?;
    let (m_u, m_v) = trapping_bounds(params, g, &state);
    let bounds = grid.step_bounds(params, f, g, m_u, m_v);
    let dt_max = match grid.dt {
        Some(dt) if !(dt > 0.0) || dt > bounds.field => {
            return Err(Error::Unstable {
                dt,
                bound: bounds.field,
            })
        }
        Some(dt) => dt,
        None => bounds.field,
    };
    let mut stepper = Stepper::new(params, f, g, grid, bounds)?;

    let threshold = level * reference.u;
    let mut series = FrontSeries {
        level: *level,
        threshold,
        ..FrontSeries::default()
    };
    let mut snaps: Vec<f64> = config.snapshots.clone();
    snaps.sort_by(f64::total_cmp);
    let mut snaps = snaps.into_iter().peekable();
    let mut snapshots = Vec::new();
    let mut warnings = Vec::new();
    let mut warned = false;

    let guard = GUARD_CELLS * grid.dx;
    let mut record = |state: &SimState, series: &mut FrontSeries, warnings: &mut Vec<String>| {
        let fronts = front_crossings(&state.u, grid, threshold).ok();
        if let Some((p, m)) = fronts {
            if !warned && (p > grid.lx - guard || m < -grid.lx + guard) {
                warned = true;
                warnings.push(format!(
                    "front within {GUARD_CELLS} cells of the lateral boundary at t = {}",
                    state.t
                ));
            }
        }
        series.push(state.t, fronts, state.u_max(), state.mass(grid));
    };
    record(&state, &mut series, &mut warnings);
    while snaps.peek().is_some_and(|&s| s <= state.t) {
        snaps.next();
        snapshots.push(state.clone());
    }

    let intervals = (grid.t_final / record_every).ceil() as usize;
    let mut steps = 0;
    let mut dt_used: f64 = 0.0;
    for k in 1..=intervals {
        let target = (k as f64 * record_every).min(grid.t_final);
        let span = target - state.t;
        if span <= 0.0 {
            continue;
        }
        let n = (span / dt_max).ceil() as usize;
        let dt = span / n as f64;
        dt_used = dt_used.max(dt);
        for _ in 0..n {
            stepper.advance(&mut state, dt)?;
        }
        steps += n;
        state.t = target;
        if let Some(detail) = state.instability() {
            return Err(Error::Instability { t: state.t, detail });
        }
        record(&state, &mut series, &mut warnings);
        while snaps.peek().is_some_and(|&s| s <= state.t + 1e-9) {
            snaps.next();
            snapshots.push(state.clone());
        }
    }
    let road_substeps = stepper.road_substeps(if dt_used > 0.0 { dt_used } else { dt_max });
    Ok(RunOutput {
        state,
        series,
        snapshots,
        reference,
        warnings,
        dt: if dt_used > 0.0 { dt_used } else { dt_max },
        road_substeps,
        steps,
    })
}

/// A least-squares slope with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpeedEstimate {
    pub speed: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Speeds of the rightward and leftward fronts (both positive when spreading).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrontSpeeds {
    pub plus: SpeedEstimate,
    pub minus: SpeedEstimate,
}

/// Least-squares slope of `x` against `t` over the last `fit_window`
/// fraction of the time span, skipping NaN entries.
pub fn fit_slope(times: &[f64], x: &[f64], fit_window: f64) -> Result<SpeedEstimate> {
    if !(fit_window > 0.0 && fit_window <= 1.0) {
        return Err(Error::invalid(
            "fit_window",
            fit_window,
            "must lie in (0, 1]",
        ));
    }
    let (Some(&t0), Some(&t1)) = (times.first(), times.last()) else {
        return Err(Error::InsufficientSamples { needed: 10, got: 0 });
    };
    let start = t1 - fit_window * (t1 - t0);
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(x)
        .filter(|(t, x)| **t >= start - 1e-12 && x.is_finite())
        .map(|(t, x)| (*t, *x))
        .collect();
    let n = pts.len();
    if n < 10 {
        return Err(Error::InsufficientSamples { needed: 10, got: n });
    }
    let nf = n as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let xm = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let stt: f64 = pts.iter().map(|p| (p.0 - tm).powi(2)).sum();
    let stx: f64 = pts.iter().map(|p| (p.0 - tm) * (p.1 - xm)).sum();
    let slope = stx / stt;
    let sse: f64 = pts
        .iter()
        .map(|p| (p.1 - xm - slope * (p.0 - tm)).powi(2))
        .sum();
    let stderr = (sse / (nf - 2.0) / stt).sqrt();
    Ok(SpeedEstimate {
        speed: slope,
        stderr,
        samples: n,
    })
}

/// Spreading speeds from a front series: `plus` from `x₊(t)`, `minus` from `-x₋(t)`.
pub fn estimate_speed(series: &FrontSeries, fit_window: f64) -> Result<FrontSpeeds> {
    let plus = fit_slope(&series.times, &series.x_plus, fit_window)?;
    let neg: Vec<f64> = series.x_minus.iter().map(|x| -x).collect();
    let minus = fit_slope(&series.times, &neg, fit_window)?;
    Ok(FrontSpeeds { plus, minus })
}

/// `sup |u - U|` and `sup |v - V(y)|` over `|x| ≤ window_halfwidth`.
pub fn profile_error(
    state: &SimState,
    grid: &GridSpec,
    stationary: &StationaryProfile,
    window_halfwidth: f64,
) -> f64 {
    let cols: Vec<usize> = (0..state.nx)
        .filter(|&i| grid.x(i).abs() <= window_halfwidth + 1e-9 * grid.dx)
        .collect();
    let mut err = 0.0f64;
    for &i in &cols {
        err = err.max((state.u[i] - stationary.u).abs());
    }
    for j in 0..state.ny {
        let vj = stationary.v_at(grid.y(j));
        let row = state.v_row(j);
        for &i in &cols {
            err = err.max((row[i] - vj).abs());
        }
    }
    err
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> GridSpec {
        GridSpec {
            lx: 10.0,
            ly: 5.0,
            dx: 0.25,
            dy: 0.25,
            dt: None,
            t_final: 2.0,
        }
    }

    fn setup(q: f64) -> (ModelParams, FieldReaction, RoadReaction) {
        (
            ModelParams::new(1.0, 1.0, 1.0, 1.0, q).unwrap(),
            FieldReaction::logistic(1.0).unwrap(),
            RoadReaction::zero(),
        )
    }

    #[test]
    fn grid_shape() {
        let g = small_grid();
        assert_eq!(g.shape().unwrap(), (81, 21));
        assert_eq!(g.x(0), -10.0);
        assert_eq!(g.x(80), 10.0);
        let bad = GridSpec { dx: 0.3, ..g };
        assert!(bad.shape().is_err());
        let desk = GridSpec::desk();
        assert_eq!(desk.shape().unwrap(), (3201, 161));
    }

    #[test]
    fn zero_state_stays_zero() {
        let (p, f, g) = setup(0.5);
        let grid = small_grid();
        let s = SimState::zeros(&grid).unwrap();
        let next = step(&s, &p, &f, &g, &grid).unwrap();
        assert!(next.u.iter().chain(next.v.iter()).all(|&x| x == 0.0));
    }

    #[test]
    fn explicit_dt_above_bound_rejected() {
        let (p, f, g) = setup(0.0);
        let grid = GridSpec {
            dt: Some(1.0),
            ..small_grid()
        };
        let s = SimState::zeros(&grid).unwrap();
        assert!(matches!(
            step(&s, &p, &f, &g, &grid),
            Err(Error::Unstable { .. })
        ));
    }

    #[test]
    fn bounds_shrink_with_mesh() {
        let (p, f, g) = setup(1.0);
        let a = small_grid().step_bounds(&p, &f, &g, 1.0, 1.0);
        let b = GridSpec {
            dx: 0.125,
            dy: 0.125,
            ..small_grid()
        }
        .step_bounds(&p, &f, &g, 1.0, 1.0);
        assert!(b.road < a.road && b.field < a.field);
        assert_eq!(a.combined(), a.road.min(a.field));
    }

    #[test]
    fn front_of_step_profile() {
        let grid = small_grid();
        let mut s = SimState::zeros(&grid).unwrap();
        for i in 0..s.nx {
            if grid.x(i) <= 3.5 {
                s.u[i] = 1.0;
            }
        }
        let reference = StationaryProfile::uniform(1.0, 1.0, 1.0);
        let (p, m) = front_position(&s, &grid, 0.5, &reference).unwrap();
        assert!((p - 3.5).abs() <= grid.dx, "{p}");
        assert_eq!(m, -10.0);
        s.u.fill(1.0);
        let (p, m) = front_position(&s, &grid, 0.5, &reference).unwrap();
        assert_eq!((p, m), (10.0, -10.0));
        s.u.fill(0.1);
        assert!(matches!(
            front_position(&s, &grid, 0.5, &reference),
            Err(Error::NoFront { .. })
        ));
    }

    #[test]
    fn slope_of_synthetic_series() {
        // x = 3t plus a deterministic zero-mean wiggle of size 0.01
        let times: Vec<f64> = (0..200).map(|k| k as f64 * 0.5).collect();
        let x: Vec<f64> = times
            .iter()
            .enumerate()
            .map(|(k, t)| 3.0 * t + 0.01 * if k % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let est = fit_slope(&times, &x, 0.5).unwrap();
        assert!((est.speed - 3.0).abs() < 1e-3);
        assert!(est.stderr < 1e-3);
        assert!(matches!(
            fit_slope(&times[..5], &x[..5], 1.0),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn estimate_speed_signs() {
        let times: Vec<f64> = (0..40).map(|k| k as f64).collect();
        let series = FrontSeries {
            x_plus: times.iter().map(|t| 2.0 * t).collect(),
            x_minus: times.iter().map(|t| -1.5 * t).collect(),
            u_max: vec![1.0; 40],
            mass: vec![1.0; 40],
            times,
            level: 0.5,
            threshold: 0.5,
        };
        let s = estimate_speed(&series, 0.5).unwrap();
        assert!((s.plus.speed - 2.0).abs() < 1e-12);
        assert!((s.minus.speed - 1.5).abs() < 1e-12);
    }

    #[test]
    fn short_run_spreads_both_ways() {
        let (p, f, g) = setup(0.0);
        let grid = GridSpec {
            lx: 40.0,
            t_final: 12.0,
            ..small_grid()
        };
        let mut cfg = SimConfig::new(p, f, g, grid);
        cfg.snapshots = vec![2.0];
        let out = run(&cfg).unwrap();
        assert_eq!(out.series.len(), 13);
        assert_eq!(out.snapshots.len(), 1);
        assert_eq!(out.snapshots[0].t, 2.0);
        let n = out.series.len();
        assert!(out.series.x_plus[n - 1] > 10.0, "{:?}", out.series.x_plus);
        assert!(out.series.x_minus[n - 1] < -10.0);
        assert!(out.series.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn zero_datum_never_develops_front() {
        let (p, f, g) = setup(0.0);
        let mut cfg = SimConfig::new(p, f, g, small_grid());
        cfg.initial = InitialData::Constant { u: 0.0, v: 0.0 };
        let out = run(&cfg).unwrap();
        assert!(out
            .state
            .u
            .iter()
            .chain(out.state.v.iter())
            .all(|&x| x == 0.0));
        assert!(out.series.x_plus.iter().all(|x| x.is_nan()));
    }

    #[test]
    fn stationary_datum_is_nearly_fixed() {
        let p = ModelParams::new(1.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        let f = FieldReaction::logistic(1.0).unwrap();
        let g = RoadReaction::mortality(1.0).unwrap();
        let grid = GridSpec {
            lx: 5.0,
            ly: 20.0,
            t_final: 10.0,
            ..small_grid()
        };
        let mut cfg = SimConfig::new(p, f, g, grid);
        cfg.initial = InitialData::Stationary;
        let out = run(&cfg).unwrap();
        let err = profile_error(&out.state, &grid, &out.reference, 5.0);
        assert!(err < 1e-3, "{err}");
    }
}
