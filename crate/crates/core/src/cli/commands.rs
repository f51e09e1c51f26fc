//! The subcommands. Each writes its files under the output directory and
//! returns the lines meant for stdout.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{Axis, DirectionChoice, RoadSpec, RunConfig, SweepSpec};
use super::csv::{flag, num, Csv};
use crate::dispersion::{
    critical_speed, critical_speed_with, limit_h, limit_k, plot_geometry, threshold_predicts_ck,
    threshold_value, CriticalSpeed, SearchOptions,
};
use crate::error::{Error, Result};
use crate::model::{Direction, ModelParams};
use crate::simulator::{estimate_speed, profile_error, run, SimState};
use crate::stationary::{check_bounds, stationary_solution};

/// Default tolerance of the critical speed search.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Header of every critical-speed table.
pub const SPEED_COLUMNS: [&str; 12] = [
    "d",
    "D",
    "mu",
    "nu",
    "q",
    "fp0",
    "gp0",
    "direction",
    "w_star",
    "at_kpp",
    "beta_star",
    "alpha_star",
];

/// Options shared by all subcommands.
#[derive(Clone, Debug)]
pub struct Options {
    pub out: PathBuf,
    pub tol: f64,
}

impl Options {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Options {
            out: out.into(),
            tol: DEFAULT_TOL,
        }
    }

    fn write(&self, name: &str, text: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out)?;
        let path = self.out.join(name);
        fs::write(&path, text)?;
        Ok(path)
    }
}

/// What a subcommand produced.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub stdout: Vec<String>,
    /// Non-fatal diagnostics for stderr.
    pub warnings: Vec<String>,
}

fn direction_label(dir: Direction) -> &'static str {
    match dir {
        Direction::Right => "+1",
        Direction::Left => "-1",
    }
}

fn speed_cells(
    p: &ModelParams,
    fp0: f64,
    gp0: f64,
    dir: Direction,
    cs: &CriticalSpeed,
) -> Vec<String> {
    let (b, a) = cs
        .witness
        .map_or((f64::NAN, f64::NAN), |w| (w.beta, w.alpha));
    vec![
        num(p.d),
        num(p.big_d),
        num(p.mu),
        num(p.nu),
        num(p.q),
        num(fp0),
        num(gp0),
        direction_label(dir).to_string(),
        num(cs.w_star),
        flag(cs.at_kpp).to_string(),
        num(b),
        num(a),
    ]
}

/// `speed.csv`: `w*+` and `w*-` for the configured model.
pub fn cmd_speed(cfg: &RunConfig, opts: &Options) -> Result<Report> {
    let f = cfg.field.build()?;
    let g = cfg.road.build()?;
    let p = &cfg.model;
    let mut csv = Csv::new(&SPEED_COLUMNS);
    let mut report = Report::default();
    for dir in [Direction::Right, Direction::Left] {
        let cs = critical_speed(p, &f, &g, dir, opts.tol)?;
        csv.row(&speed_cells(p, f.f_prime_0(), g.g_prime_0(), dir, &cs));
        report.stdout.push(format!(
            "w_star{} = {} (c_K = {}, at_kpp = {})",
            direction_label(dir),
            num(cs.w_star),
            num(cs.c_kpp),
            cs.at_kpp
        ));
    }
    report
        .files
        .push(opts.write("speed.csv", &csv.into_string())?);
    Ok(report)
}

/// One point of a sweep: the model with the swept rates substituted.
#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub params: ModelParams,
    pub road: RoadSpec,
}

impl SweepPoint {
    fn g_prime_0(&self) -> Result<f64> {
        Ok(self.road.build()?.g_prime_0())
    }
}

fn axis_or(axis: &Option<Axis>, fallback: f64) -> Vec<f64> {
    axis.as_ref().map_or(vec![fallback], Axis::values)
}

/// Parameter points of a sweep in output order: the Cartesian grid with `D`
/// slowest and `rho` fastest, or `random_points` uniform draws from the axis
/// ranges. A `rho` axis replaces the road by a pure mortality.
pub fn sweep_points(cfg: &RunConfig) -> Result<Vec<SweepPoint>> {
    let base = cfg.model;
    let default = SweepSpec::default();
    let sw = cfg.sweep.as_ref().unwrap_or(&default);
    let road_at = |rho: Option<f64>| match rho {
        Some(rho) => RoadSpec::Mortality { rho },
        None => cfg.road.clone(),
    };
    let mut points = Vec::new();
    match sw.random_points {
        None => {
            let rhos: Vec<Option<f64>> = match &sw.rho {
                Some(a) => a.values().into_iter().map(Some).collect(),
                None => vec![None],
            };
            for big_d in axis_or(&sw.big_d, base.big_d) {
                for q in axis_or(&sw.q, base.q) {
                    for rho in &rhos {
                        points.push(SweepPoint {
                            params: ModelParams::new(base.d, big_d, base.mu, base.nu, q)?,
                            road: road_at(*rho),
                        });
                    }
                }
            }
        }
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(sw.seed);
            let draw = |axis: &Option<Axis>, rng: &mut ChaCha8Rng| {
                axis.as_ref().map(|a| {
                    let (lo, hi) = a.bounds();
                    lo + (hi - lo) * rng.gen::<f64>()
                })
            };
            for _ in 0..n {
                let big_d = draw(&sw.big_d, &mut rng).unwrap_or(base.big_d);
                let q = draw(&sw.q, &mut rng).unwrap_or(base.q);
                let rho = draw(&sw.rho, &mut rng);
                points.push(SweepPoint {
                    params: ModelParams::new(base.d, big_d, base.mu, base.nu, q)?,
                    road: road_at(rho),
                });
            }
        }
    }
    Ok(points)
}

fn directions(choice: DirectionChoice) -> &'static [Direction] {
    match choice {
        DirectionChoice::Right => &[Direction::Right],
        DirectionChoice::Left => &[Direction::Left],
        DirectionChoice::Both => &[Direction::Right, Direction::Left],
    }
}

/// `thresholds.csv`: the closed-form enhancement test against the computed
/// critical speed at every sweep point.
pub fn cmd_thresholds(cfg: &RunConfig, opts: &Options) -> Result<Report> {
    let fp0 = cfg.field.build()?.f_prime_0();
    let dirs = directions(
        cfg.sweep
            .as_ref()
            .map_or(DirectionChoice::Right, |s| s.direction),
    );
    let points = sweep_points(cfg)?;
    let rows: Vec<Result<Vec<Vec<String>>>> = points
        .par_iter()
        .map(|pt| {
            let gp0 = pt.g_prime_0()?;
            dirs.iter()
                .map(|&dir| {
                    let p = &pt.params;
                    let cs =
                        critical_speed_with(p, fp0, gp0, dir, opts.tol, &SearchOptions::default())?;
                    let predicts = threshold_predicts_ck(p, fp0, gp0, dir);
                    Ok(vec![
                        num(p.big_d),
                        num(p.q),
                        num(gp0),
                        direction_label(dir).to_string(),
                        num(p.big_d / p.d),
                        num(threshold_value(p, fp0, gp0, dir)),
                        flag(predicts).to_string(),
                        num(cs.w_star),
                        flag(cs.at_kpp).to_string(),
                        flag(predicts == cs.at_kpp).to_string(),
                    ])
                })
                .collect()
        })
        .collect();
    let mut csv = Csv::new(&[
        "D",
        "q",
        "gp0",
        "direction",
        "D_over_d",
        "threshold",
        "predicts_ck",
        "w_star",
        "at_kpp",
        "agree",
    ]);
    let mut disagreements = 0;
    for block in rows {
        for row in block? {
            disagreements += usize::from(row[9] == "false");
            csv.row(&row);
        }
    }
    let mut report = Report::default();
    report.stdout.push(format!(
        "{} points, {} disagreements between threshold and search",
        points.len(),
        disagreements
    ));
    report
        .files
        .push(opts.write("thresholds.csv", &csv.into_string())?);
    Ok(report)
}

/// `sweep.csv`: critical speeds over the sweep points, computed in parallel
/// and written in point order.
pub fn cmd_sweep(cfg: &RunConfig, opts: &Options) -> Result<Report> {
    let fp0 = cfg.field.build()?.f_prime_0();
    let dirs = directions(
        cfg.sweep
            .as_ref()
            .map_or(DirectionChoice::Right, |s| s.direction),
    );
    let points = sweep_points(cfg)?;
    let rows: Vec<Result<Vec<Vec<String>>>> = points
        .par_iter()
        .map(|pt| {
            let gp0 = pt.g_prime_0()?;
            dirs.iter()
                .map(|&dir| {
                    let cs = critical_speed_with(
                        &pt.params,
                        fp0,
                        gp0,
                        dir,
                        opts.tol,
                        &SearchOptions::default(),
                    )?;
                    Ok(speed_cells(&pt.params, fp0, gp0, dir, &cs))
                })
                .collect()
        })
        .collect();
    let mut csv = Csv::new(&SPEED_COLUMNS);
    for block in rows {
        for row in block? {
            csv.row(&row);
        }
    }
    let mut report = Report::default();
    report.stdout.push(format!("{} points", points.len()));
    report
        .files
        .push(opts.write("sweep.csv", &csv.into_string())?);
    Ok(report)
}

/// `stationary.csv`: the profile `V(y)` with `U`, `V(0)`, `V'(0)` and its
/// classification in a leading comment line.
pub fn cmd_stationary(cfg: &RunConfig, opts: &Options) -> Result<Report> {
    let f = cfg.field.build()?;
    let g = cfg.road.build()?;
    let p = &cfg.model;
    let prof = stationary_solution(p, &g, &f)?;
    let class = if !prof.converged {
        "unconverged"
    } else if prof.minimal_candidate {
        "minimal-candidate"
    } else {
        "unique"
    };
    let mut csv = Csv::with_preamble(
        &format!(
            "U={},V0={},V_prime_0={},classification={class}",
            num(prof.u),
            num(prof.v0),
            num(prof.v_prime_0)
        ),
        &["y", "V"],
    );
    for (y, v) in prof.y.iter().zip(&prof.v) {
        csv.numbers(&[*y, *v]);
    }
    let mut report = Report::default();
    report.stdout.push(format!(
        "U = {}, V(0) = {}, V'(0) = {}, classification = {class}",
        num(prof.u),
        num(prof.v0),
        num(prof.v_prime_0)
    ));
    let bounds = match g.s_star() {
        Some(_) => flag(check_bounds(&prof, p, &g)),
        None => "n/a",
    };
    report.stdout.push(format!("check_bounds = {bounds}"));
    if !prof.converged {
        report.warnings.push(format!(
            "profile did not settle at 1: |V(y_max) - 1| = {:e}",
            prof.tail_residual
        ));
    }
    report
        .files
        .push(opts.write("stationary.csv", &csv.into_string())?);
    Ok(report)
}

fn snapshot_csv(state: &SimState, cfg: &RunConfig) -> String {
    let grid = cfg.grid.clone().unwrap_or_default().spec;
    let mut csv = Csv::with_preamble(&format!("t={}", num(state.t)), &["x", "y", "v"]);
    for j in 0..state.ny {
        let y = grid.y(j);
        for (i, v) in state.v_row(j).iter().enumerate() {
            csv.numbers(&[grid.x(i), y, *v]);
        }
    }
    csv.into_string()
}

/// `fronts.csv` and optional `snapshot_NNN.csv` files from a simulation,
/// with the fitted speeds against `w*±` on stdout.
pub fn cmd_simulate(cfg: &RunConfig, opts: &Options) -> Result<Report> {
    let sim = cfg.sim_config()?;
    let section = cfg.grid.clone().unwrap_or_default();
    let out = run(&sim)?;
    let mut report = Report {
        warnings: out.warnings.clone(),
        ..Report::default()
    };

    let s = &out.series;
    let mut csv = Csv::new(&["t", "x_front_plus", "x_front_minus", "u_max", "mass"]);
    for k in 0..s.len() {
        csv.numbers(&[s.times[k], s.x_plus[k], s.x_minus[k], s.u_max[k], s.mass[k]]);
    }
    report
        .files
        .push(opts.write("fronts.csv", &csv.into_string())?);
    for (k, snap) in out.snapshots.iter().enumerate() {
        let name = format!("snapshot_{k:03}.csv");
        report
            .files
            .push(opts.write(&name, &snapshot_csv(snap, cfg))?);
    }

    report.stdout.push(format!(
        "dt = {}, road substeps = {}, steps = {}",
        num(out.dt),
        out.road_substeps,
        out.steps
    ));
    let speeds = estimate_speed(s, section.fit_window);
    for (dir, est) in [
        (Direction::Right, speeds.as_ref().map(|s| s.plus)),
        (Direction::Left, speeds.as_ref().map(|s| s.minus)),
    ] {
        let cs = critical_speed(&sim.params, &sim.f, &sim.g, dir, opts.tol)?;
        match est {
            Ok(e) => report.stdout.push(format!(
                "speed{} = {} ± {} (w_star = {}, relative difference = {})",
                direction_label(dir),
                num(e.speed),
                num(e.stderr),
                num(cs.w_star),
                num((e.speed - cs.w_star) / cs.w_star)
            )),
            Err(err) => {
                report.stdout.push(format!(
                    "speed{} unavailable (w_star = {})",
                    direction_label(dir),
                    num(cs.w_star)
                ));
                report.warnings.push(err.to_string());
            }
        }
    }
    let err = profile_error(
        &out.state,
        &sim.grid,
        &out.reference,
        section.profile_window,
    );
    report.stdout.push(format!(
        "profile_error(|x| <= {}) = {}",
        section.profile_window,
        num(err)
    ));
    Ok(report)
}

/// `limits.csv`: the large-`D` and large-`q` constants `h` and `k`.
pub fn cmd_limits(cfg: &RunConfig, opts: &Options) -> Result<Report> {
    let fp0 = cfg.field.build()?.f_prime_0();
    let gp0 = cfg.road.build()?.g_prime_0();
    let p = &cfg.model;
    let h = limit_h(p, fp0, gp0)?;
    let k = limit_k(p, fp0, gp0)?;
    let mut csv = Csv::new(&["d", "mu", "nu", "fp0", "gp0", "h", "k"]);
    csv.numbers(&[p.d, p.mu, p.nu, fp0, gp0, h, k]);
    let mut report = Report::default();
    report
        .stdout
        .push(format!("h = {}, k = {}", num(h), num(k)));
    report
        .files
        .push(opts.write("limits.csv", &csv.into_string())?);
    Ok(report)
}

/// `geometry.svg` at the configured speed, or at `w*+` when none is given.
pub fn cmd_geometry(cfg: &RunConfig, opts: &Options) -> Result<Report> {
    let f = cfg.field.build()?;
    let g = cfg.road.build()?;
    let p = &cfg.model;
    let c = match cfg.geometry_c {
        Some(c) => c,
        None => critical_speed(p, &f, &g, Direction::Right, opts.tol)?.w_star,
    };
    let plot = plot_geometry(p, &f, &g, c)?;
    let mut report = Report::default();
    report.stdout.push(format!(
        "c = {}, c_K = {}, overlap area = {}",
        num(plot.c),
        num(plot.c_kpp),
        num(plot.overlap_area)
    ));
    report.files.push(opts.write("geometry.svg", &plot.svg)?);
    Ok(report)
}

/// Read a config file; any failure is a configuration error.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    super::config::parse_config(&text)
}
