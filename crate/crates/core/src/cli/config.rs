//! Flat `key = value` configuration with `[section]` headers and `#` comments.
//!
//! ```text
//! [model]
//! d = 1
//! D = 2
//! mu = 1
//! nu = 1
//! q = 0
//!
//! [field]
//! kind = logistic
//! r = 1
//!
//! [road]
//! kind = mortality
//! rho = 1
//! ```
//!
//! [`emit_config`] writes the canonical form: fixed section and key order,
//! floats in shortest round-trip notation. `parse_config(emit_config(c)) == c`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{FieldReaction, ModelParams, RoadReaction};
use crate::simulator::{GridSpec, InitialData, SimConfig};

/// Field nonlinearity as written in a config.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldSpec {
    Logistic {
        r: f64,
    },
    Samples {
        s: Vec<f64>,
        f: Vec<f64>,
        concave: bool,
    },
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Logistic { r: 1.0 }
    }
}

impl FieldSpec {
    pub fn build(&self) -> Result<FieldReaction> {
        match self {
            FieldSpec::Logistic { r } => FieldReaction::logistic(*r),
            FieldSpec::Samples { s, f, concave } => {
                FieldReaction::tabulated(s.clone(), f.clone(), *concave)
            }
        }
    }
}

/// Road reaction as written in a config.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum RoadSpec {
    #[default]
    Zero,
    Mortality {
        rho: f64,
    },
    Logistic {
        slope: f64,
        kappa: f64,
    },
    Samples {
        s: Vec<f64>,
        g: Vec<f64>,
        concave: bool,
    },
}

impl RoadSpec {
    pub fn build(&self) -> Result<RoadReaction> {
        match self {
            RoadSpec::Zero => Ok(RoadReaction::zero()),
            RoadSpec::Mortality { rho } => RoadReaction::mortality(*rho),
            RoadSpec::Logistic { slope, kappa } => RoadReaction::logistic(*slope, *kappa),
            RoadSpec::Samples { s, g, concave } => {
                RoadReaction::tabulated(s.clone(), g.clone(), *concave)
            }
        }
    }
}

/// Initial datum selectable from a config.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InitialKind {
    #[default]
    Bump,
    Stationary,
}

/// The `[grid]` section: domain, stepping and front-tracking options.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSection {
    pub spec: GridSpec,
    pub record_every: f64,
    pub level: f64,
    pub fit_window: f64,
    pub profile_window: f64,
    pub initial: InitialKind,
    pub snapshots: Vec<f64>,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            spec: GridSpec::desk(),
            record_every: 1.0,
            level: 0.5,
            fit_window: 0.5,
            profile_window: 20.0,
            initial: InitialKind::Bump,
            snapshots: Vec::new(),
        }
    }
}

/// Values taken by one sweep coordinate.
#[derive(Clone, Debug, PartialEq)]
pub enum Axis {
    /// `n` evenly spaced values from `lo` to `hi` inclusive.
    Range {
        lo: f64,
        hi: f64,
        n: usize,
    },
    List(Vec<f64>),
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Axis::Range { lo, hi, n } => crate::numeric::linspace(*lo, *hi, *n),
            Axis::List(v) => v.clone(),
        }
    }

    pub fn bounds(&self) -> (f64, f64) {
        let v = self.values();
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

/// Which critical speeds a sweep evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DirectionChoice {
    #[default]
    Right,
    Left,
    Both,
}

/// The `[sweep]` section.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SweepSpec {
    pub big_d: Option<Axis>,
    pub q: Option<Axis>,
    pub rho: Option<Axis>,
    pub direction: DirectionChoice,
    /// Draw this many points uniformly from the axis ranges instead of
    /// taking the Cartesian grid.
    pub random_points: Option<usize>,
    pub seed: u64,
}

/// A whole configuration file.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: ModelParams,
    pub field: FieldSpec,
    pub road: RoadSpec,
    pub grid: Option<GridSection>,
    pub sweep: Option<SweepSpec>,
    /// Speed at which `geometry` draws the dispersion sets.
    pub geometry_c: Option<f64>,
}

impl RunConfig {
    pub fn minimal(model: ModelParams) -> Self {
        RunConfig {
            model,
            field: FieldSpec::default(),
            road: RoadSpec::default(),
            grid: None,
            sweep: None,
            geometry_c: None,
        }
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        let grid = self.grid.clone().unwrap_or_default();
        let mut cfg = SimConfig::new(
            self.model,
            self.field.build()?,
            self.road.build()?,
            grid.spec,
        );
        cfg.record_every = grid.record_every;
        cfg.level = grid.level;
        cfg.snapshots = grid.snapshots.clone();
        cfg.initial = match grid.initial {
            InitialKind::Bump => InitialData::default(),
            InitialKind::Stationary => InitialData::Stationary,
        };
        Ok(cfg)
    }
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

/// One `key = value` entry with its line number.
struct Entry {
    line: usize,
    value: String,
}

struct Section {
    line: usize,
    entries: BTreeMap<String, Entry>,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<Entry> {
        self.entries.remove(key)
    }

    fn finish(self, name: &str) -> Result<()> {
        match self.entries.into_iter().min_by_key(|(_, e)| e.line) {
            Some((k, e)) => Err(config_err(e.line, format!("unknown key `{k}` in [{name}]"))),
            None => Ok(()),
        }
    }

    fn number(&mut self, key: &str) -> Result<Option<(f64, usize)>> {
        self.take(key)
            .map(|e| parse_number(&e.value, key, e.line).map(|x| (x, e.line)))
            .transpose()
    }

    fn required(&mut self, key: &str, section: &str) -> Result<(f64, usize)> {
        self.number(key)?
            .ok_or_else(|| config_err(self.line, format!("[{section}] is missing key `{key}`")))
    }

    fn list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        self.take(key)
            .map(|e| {
                e.value
                    .split(',')
                    .map(|t| parse_number(t.trim(), key, e.line))
                    .collect()
            })
            .transpose()
    }

    fn flag(&mut self, key: &str) -> Result<Option<bool>> {
        self.take(key)
            .map(|e| match e.value.as_str() {
                "true" => Ok(true),
                "false" => Ok(false),
                v => Err(config_err(
                    e.line,
                    format!("key `{key}`: expected true or false, got `{v}`"),
                )),
            })
            .transpose()
    }
}

fn parse_number(text: &str, key: &str, line: usize) -> Result<f64> {
    match text.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(config_err(
            line,
            format!("key `{key}`: `{text}` is not a finite number"),
        )),
    }
}

fn check(cond: bool, line: usize, key: &str, x: f64, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(config_err(line, format!("key `{key}` = {x}: {what}")))
    }
}

const SECTIONS: [&str; 6] = ["model", "field", "road", "grid", "sweep", "geometry"];

fn split_sections(text: &str) -> Result<BTreeMap<String, Section>> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| config_err(line, format!("malformed section header `{content}`")))?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(config_err(line, format!("unknown section [{name}]")));
            }
            if sections.contains_key(name) {
                return Err(config_err(line, format!("duplicate section [{name}]")));
            }
            sections.insert(
                name.to_string(),
                Section {
                    line,
                    entries: BTreeMap::new(),
                },
            );
            current = Some(name.to_string());
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| config_err(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(config_err(
                line,
                format!("expected `key = value`, got `{content}`"),
            ));
        }
        let name = current
            .as_ref()
            .ok_or_else(|| config_err(line, "key outside of any section"))?;
        let section = sections.get_mut(name).expect("section registered");
        if section.entries.contains_key(key) {
            return Err(config_err(
                line,
                format!("duplicate key `{key}` in [{name}]"),
            ));
        }
        section.entries.insert(
            key.to_string(),
            Entry {
                line,
                value: value.to_string(),
            },
        );
    }
    Ok(sections)
}

fn parse_model(mut s: Section) -> Result<ModelParams> {
    let mut get = |key: &str| -> Result<f64> {
        let (x, line) = s.required(key, "model")?;
        check(x > 0.0, line, key, x, "must be positive")?;
        Ok(x)
    };
    let d = get("d")?;
    let big_d = get("D")?;
    let mu = get("mu")?;
    let nu = get("nu")?;
    let q = s.number("q")?.map_or(0.0, |(x, _)| x);
    s.finish("model")?;
    ModelParams::new(d, big_d, mu, nu, q)
}

fn samples(
    s: &mut Section,
    section: &str,
    abscissa: &str,
    ordinate: &str,
) -> Result<(Vec<f64>, Vec<f64>, bool)> {
    let line = s.line;
    let xs = s
        .list(abscissa)?
        .ok_or_else(|| config_err(line, format!("[{section}] samples need key `{abscissa}`")))?;
    let ys = s
        .list(ordinate)?
        .ok_or_else(|| config_err(line, format!("[{section}] samples need key `{ordinate}`")))?;
    let concave = s.flag("concave")?.unwrap_or(false);
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(config_err(
            line,
            format!("[{section}] `{abscissa}` and `{ordinate}` need equal lengths of at least 2"),
        ));
    }
    if xs[0] != 0.0 || xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(config_err(
            line,
            format!("[{section}] `{abscissa}` must start at 0 and increase"),
        ));
    }
    Ok((xs, ys, concave))
}

fn kind_of(s: &mut Section, default: &str) -> (String, usize) {
    match s.take("kind") {
        Some(e) => (e.value, e.line),
        None => (default.to_string(), s.line),
    }
}

fn parse_field(mut s: Section) -> Result<FieldSpec> {
    let (kind, line) = kind_of(&mut s, "logistic");
    let spec = match kind.as_str() {
        "logistic" => {
            let r = s.number("r")?;
            let (r, rl) = r.unwrap_or((1.0, line));
            check(r > 0.0, rl, "r", r, "must be positive")?;
            FieldSpec::Logistic { r }
        }
        "samples" => {
            let (xs, ys, concave) = samples(&mut s, "field", "s", "f")?;
            FieldSpec::Samples {
                s: xs,
                f: ys,
                concave,
            }
        }
        other => return Err(config_err(line, format!("unknown field kind `{other}`"))),
    };
    s.finish("field")?;
    Ok(spec)
}

fn parse_road(mut s: Section) -> Result<RoadSpec> {
    let (kind, line) = kind_of(&mut s, "zero");
    let spec = match kind.as_str() {
        "zero" => RoadSpec::Zero,
        "mortality" => {
            let (rho, rl) = s.required("rho", "road")?;
            check(rho >= 0.0, rl, "rho", rho, "must be nonnegative")?;
            RoadSpec::Mortality { rho }
        }
        "logistic" => {
            let (slope, sl) = s.required("slope", "road")?;
            check(slope >= 0.0, sl, "slope", slope, "must be nonnegative")?;
            let (kappa, kl) = s.required("kappa", "road")?;
            check(kappa > 0.0, kl, "kappa", kappa, "must be positive")?;
            RoadSpec::Logistic { slope, kappa }
        }
        "samples" => {
            let (xs, ys, concave) = samples(&mut s, "road", "s", "g")?;
            RoadSpec::Samples {
                s: xs,
                g: ys,
                concave,
            }
        }
        other => return Err(config_err(line, format!("unknown road kind `{other}`"))),
    };
    s.finish("road")?;
    Ok(spec)
}

fn parse_grid(mut s: Section) -> Result<GridSection> {
    let mut g = GridSection::default();
    let positive = |s: &mut Section, key: &str, slot: &mut f64| -> Result<()> {
        if let Some((x, line)) = s.number(key)? {
            check(x > 0.0, line, key, x, "must be positive")?;
            *slot = x;
        }
        Ok(())
    };
    positive(&mut s, "lx", &mut g.spec.lx)?;
    positive(&mut s, "ly", &mut g.spec.ly)?;
    positive(&mut s, "dx", &mut g.spec.dx)?;
    positive(&mut s, "dy", &mut g.spec.dy)?;
    if let Some((x, line)) = s.number("dt")? {
        check(x > 0.0, line, "dt", x, "must be positive")?;
        g.spec.dt = Some(x);
    }
    if let Some((x, line)) = s.number("t_final")? {
        check(x >= 0.0, line, "t_final", x, "must be nonnegative")?;
        g.spec.t_final = x;
    }
    positive(&mut s, "record_every", &mut g.record_every)?;
    if let Some((x, line)) = s.number("level")? {
        check(x > 0.0 && x < 1.0, line, "level", x, "must lie in (0, 1)")?;
        g.level = x;
    }
    if let Some((x, line)) = s.number("fit_window")? {
        check(
            x > 0.0 && x <= 1.0,
            line,
            "fit_window",
            x,
            "must lie in (0, 1]",
        )?;
        g.fit_window = x;
    }
    positive(&mut s, "profile_window", &mut g.profile_window)?;
    if let Some(e) = s.take("initial") {
        g.initial = match e.value.as_str() {
            "bump" => InitialKind::Bump,
            "stationary" => InitialKind::Stationary,
            v => return Err(config_err(e.line, format!("unknown initial datum `{v}`"))),
        };
    }
    if let Some(e) = s.take("snapshots") {
        g.snapshots = e
            .value
            .split(',')
            .map(|t| parse_number(t.trim(), "snapshots", e.line))
            .collect::<Result<_>>()?;
    }
    s.finish("grid")?;
    Ok(g)
}

fn parse_axis(s: &mut Section, key: &str) -> Result<Option<Axis>> {
    let Some(e) = s.take(key) else {
        return Ok(None);
    };
    let parts: Vec<&str> = e.value.split(':').map(str::trim).collect();
    let axis = match parts.as_slice() {
        [lo, hi, n] => {
            let lo = parse_number(lo, key, e.line)?;
            let hi = parse_number(hi, key, e.line)?;
            let n: usize = n
                .parse()
                .map_err(|_| config_err(e.line, format!("key `{key}`: `{n}` is not a count")))?;
            if n == 0 {
                return Err(config_err(
                    e.line,
                    format!("key `{key}`: range needs at least one point"),
                ));
            }
            Axis::Range { lo, hi, n }
        }
        [list] => Axis::List(
            list.split(',')
                .map(|t| parse_number(t.trim(), key, e.line))
                .collect::<Result<_>>()?,
        ),
        _ => {
            return Err(config_err(
                e.line,
                format!("key `{key}`: expected `lo:hi:n` or a list"),
            ))
        }
    };
    let ok = match key {
        "D" => axis.values().iter().all(|&x| x > 0.0),
        "rho" => axis.values().iter().all(|&x| x >= 0.0),
        _ => true,
    };
    if !ok {
        return Err(config_err(
            e.line,
            format!("key `{key}`: values out of range"),
        ));
    }
    Ok(Some(axis))
}

fn parse_sweep(mut s: Section) -> Result<SweepSpec> {
    let mut sw = SweepSpec {
        big_d: parse_axis(&mut s, "D")?,
        q: parse_axis(&mut s, "q")?,
        rho: parse_axis(&mut s, "rho")?,
        ..SweepSpec::default()
    };
    if let Some(e) = s.take("direction") {
        sw.direction = match e.value.as_str() {
            "right" => DirectionChoice::Right,
            "left" => DirectionChoice::Left,
            "both" => DirectionChoice::Both,
            v => return Err(config_err(e.line, format!("unknown direction `{v}`"))),
        };
    }
    if let Some(e) = s.take("random_points") {
        let n: usize = e.value.parse().map_err(|_| {
            config_err(
                e.line,
                format!("key `random_points`: `{}` is not a count", e.value),
            )
        })?;
        sw.random_points = Some(n);
    }
    if let Some(e) = s.take("seed") {
        sw.seed = e.value.parse().map_err(|_| {
            config_err(
                e.line,
                format!("key `seed`: `{}` is not an integer", e.value),
            )
        })?;
    }
    s.finish("sweep")?;
    Ok(sw)
}

/// Parse a configuration, reporting the first problem with its line number.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut sections = split_sections(text)?;
    let model = match sections.remove("model") {
        Some(s) => parse_model(s)?,
        None => return Err(config_err(0, "missing section [model]")),
    };
    let field = sections
        .remove("field")
        .map(parse_field)
        .transpose()?
        .unwrap_or_default();
    let road = sections
        .remove("road")
        .map(parse_road)
        .transpose()?
        .unwrap_or_default();
    let grid = sections.remove("grid").map(parse_grid).transpose()?;
    let sweep = sections.remove("sweep").map(parse_sweep).transpose()?;
    let geometry_c = match sections.remove("geometry") {
        Some(mut s) => {
            let c = s.number("c")?;
            if let Some((c, line)) = c {
                check(c > 0.0, line, "c", c, "must be positive")?;
            }
            s.finish("geometry")?;
            c.map(|(c, _)| c)
        }
        None => None,
    };
    Ok(RunConfig {
        model,
        field,
        road,
        grid,
        sweep,
        geometry_c,
    })
}

/// Shortest text that parses back to exactly `x`.
pub fn fmt_value(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter()
        .map(|&x| fmt_value(x))
        .collect::<Vec<_>>()
        .join(",")
}

fn fmt_axis(a: &Axis) -> String {
    match a {
        Axis::Range { lo, hi, n } => format!("{}:{}:{n}", fmt_value(*lo), fmt_value(*hi)),
        Axis::List(v) => fmt_list(v),
    }
}

/// Canonical text of a configuration.
pub fn emit_config(c: &RunConfig) -> String {
    let mut o = String::new();
    let m = &c.model;
    let _ = writeln!(o, "[model]");
    let _ = writeln!(o, "d = {}", fmt_value(m.d));
    let _ = writeln!(o, "D = {}", fmt_value(m.big_d));
    let _ = writeln!(o, "mu = {}", fmt_value(m.mu));
    let _ = writeln!(o, "nu = {}", fmt_value(m.nu));
    let _ = writeln!(o, "q = {}", fmt_value(m.q));

    let _ = writeln!(o, "\n[field]");
    match &c.field {
        FieldSpec::Logistic { r } => {
            let _ = writeln!(o, "kind = logistic\nr = {}", fmt_value(*r));
        }
        FieldSpec::Samples { s, f, concave } => {
            let _ = writeln!(
                o,
                "kind = samples\ns = {}\nf = {}\nconcave = {concave}",
                fmt_list(s),
                fmt_list(f)
            );
        }
    }

    let _ = writeln!(o, "\n[road]");
    match &c.road {
        RoadSpec::Zero => {
            let _ = writeln!(o, "kind = zero");
        }
        RoadSpec::Mortality { rho } => {
            let _ = writeln!(o, "kind = mortality\nrho = {}", fmt_value(*rho));
        }
        RoadSpec::Logistic { slope, kappa } => {
            let _ = writeln!(
                o,
                "kind = logistic\nslope = {}\nkappa = {}",
                fmt_value(*slope),
                fmt_value(*kappa)
            );
        }
        RoadSpec::Samples { s, g, concave } => {
            let _ = writeln!(
                o,
                "kind = samples\ns = {}\ng = {}\nconcave = {concave}",
                fmt_list(s),
                fmt_list(g)
            );
        }
    }

    if let Some(g) = &c.grid {
        let sp = &g.spec;
        let _ = writeln!(o, "\n[grid]");
        let _ = writeln!(o, "lx = {}", fmt_value(sp.lx));
        let _ = writeln!(o, "ly = {}", fmt_value(sp.ly));
        let _ = writeln!(o, "dx = {}", fmt_value(sp.dx));
        let _ = writeln!(o, "dy = {}", fmt_value(sp.dy));
        if let Some(dt) = sp.dt {
            let _ = writeln!(o, "dt = {}", fmt_value(dt));
        }
        let _ = writeln!(o, "t_final = {}", fmt_value(sp.t_final));
        let _ = writeln!(o, "record_every = {}", fmt_value(g.record_every));
        let _ = writeln!(o, "level = {}", fmt_value(g.level));
        let _ = writeln!(o, "fit_window = {}", fmt_value(g.fit_window));
        let _ = writeln!(o, "profile_window = {}", fmt_value(g.profile_window));
        let init = match g.initial {
            InitialKind::Bump => "bump",
            InitialKind::Stationary => "stationary",
        };
        let _ = writeln!(o, "initial = {init}");
        if !g.snapshots.is_empty() {
            let _ = writeln!(o, "snapshots = {}", fmt_list(&g.snapshots));
        }
    }

    if let Some(sw) = &c.sweep {
        let _ = writeln!(o, "\n[sweep]");
        for (key, axis) in [("D", &sw.big_d), ("q", &sw.q), ("rho", &sw.rho)] {
            if let Some(a) = axis {
                let _ = writeln!(o, "{key} = {}", fmt_axis(a));
            }
        }
        let dir = match sw.direction {
            DirectionChoice::Right => "right",
            DirectionChoice::Left => "left",
            DirectionChoice::Both => "both",
        };
        let _ = writeln!(o, "direction = {dir}");
        if let Some(n) = sw.random_points {
            let _ = writeln!(o, "random_points = {n}");
        }
        let _ = writeln!(o, "seed = {}", sw.seed);
    }

    if let Some(c) = c.geometry_c {
        let _ = writeln!(o, "\n[geometry]\nc = {}", fmt_value(c));
    }
    o
}
