//! Explicit monotone update of the road–field system.
//!
//! Every new value is written as a nonnegative combination of old values, so
//! nonnegativity and order are preserved under the step bound. The road may
//! take several substeps per field step with `v(x, 0)` frozen.

use rayon::prelude::*;

use super::{GridSpec, SimState};
use crate::error::{Error, Result};
use crate::model::{FieldKind, FieldReaction, ModelParams, RoadKind, RoadReaction};

/// Values below this are flushed to zero to keep the far field out of the
/// subnormal range. The map is nondecreasing, so comparison survives it.
pub const FLUSH_BELOW: f64 = 1e-200;
/// Any value beyond this (or non-finite) is reported as an instability.
pub const BLOWUP: f64 = 1e6;
/// Fraction of the monotonicity bound used by default.
pub const SAFETY: f64 = 0.9;

#[inline(always)]
fn flush(x: f64) -> f64 {
    if x < FLUSH_BELOW {
        0.0
    } else {
        x
    }
}

/// Largest monotone steps for the road and the field given the a priori
/// bounds `m_u ≥ u`, `m_v ≥ v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepBounds {
    pub road: f64,
    pub field: f64,
}

impl StepBounds {
    pub fn new(
        params: &ModelParams,
        f: &FieldReaction,
        g: &RoadReaction,
        grid: &GridSpec,
        m_u: f64,
        m_v: f64,
    ) -> Self {
        let (dx, dy) = (grid.dx, grid.dy);
        let lg = g.max_decay_rate(m_u);
        let lf = f.max_decay_rate(m_v);
        let road = SAFETY * dx * dx
            / (2.0 * params.big_d + params.q.abs() * dx + dx * dx * (params.mu + lg));
        let field = SAFETY
            / (2.0 * params.d * (1.0 / (dx * dx) + 1.0 / (dy * dy)) + 2.0 * params.nu / dy + lf);
        StepBounds { road, field }
    }

    /// The single-rate bound `min(road, field)`.
    pub fn combined(&self) -> f64 {
        self.road.min(self.field)
    }
}

/// Reusable buffers and coefficients for stepping one configuration.
pub struct Stepper<'a> {
    params: ModelParams,
    f: &'a FieldReaction,
    g: &'a RoadReaction,
    nx: usize,
    ny: usize,
    dx: f64,
    dy: f64,
    bounds: StepBounds,
    u_buf: Vec<f64>,
    u_tmp: Vec<f64>,
    v_buf: Vec<f64>,
}

impl<'a> Stepper<'a> {
    pub fn new(
        params: &ModelParams,
        f: &'a FieldReaction,
        g: &'a RoadReaction,
        grid: &GridSpec,
        bounds: StepBounds,
    ) -> Result<Self> {
        let (nx, ny) = grid.shape()?;
        Ok(Stepper {
            params: *params,
            f,
            g,
            nx,
            ny,
            dx: grid.dx,
            dy: grid.dy,
            bounds,
            u_buf: vec![0.0; nx],
            u_tmp: vec![0.0; nx],
            v_buf: vec![0.0; nx * ny],
        })
    }

    pub fn bounds(&self) -> StepBounds {
        self.bounds
    }

    /// Number of road substeps used inside a field step of length `dt`.
    pub fn road_substeps(&self, dt: f64) -> usize {
        ((dt / self.bounds.road).ceil() as usize).max(1)
    }

    /// Advance `state` by `dt`, which must not exceed the field bound.
    pub fn advance(&mut self, state: &mut SimState, dt: f64) -> Result<()> {
        if !(dt > 0.0) || dt > self.bounds.field * (1.0 + 1e-12) {
            return Err(Error::Unstable {
                dt,
                bound: self.bounds.field,
            });
        }
        let nx = self.nx;
        debug_assert_eq!(state.u.len(), nx);
        debug_assert_eq!(state.v.len(), nx * self.ny);

        // road, with v(x, 0) frozen at the old value
        let k = self.road_substeps(dt);
        let dtr = dt / k as f64;
        self.u_buf.copy_from_slice(&state.u);
        for _ in 0..k {
            self.road_substep(&state.v[..nx], dtr);
        }

        // field, coupled to the old road
        self.field_step(&state.u, &state.v, dt);

        std::mem::swap(&mut state.u, &mut self.u_buf);
        std::mem::swap(&mut state.v, &mut self.v_buf);
        state.t += dt;
        Ok(())
    }

    fn road_substep(&mut self, v0: &[f64], dt: f64) {
        let p = &self.params;
        let nx = self.nx;
        let diff = p.big_d / (self.dx * self.dx);
        let cm = dt * (diff + p.q.max(0.0) / self.dx);
        let cp = dt * (diff + (-p.q).max(0.0) / self.dx);
        let c0 = 1.0 - dt * (2.0 * diff + p.q.abs() / self.dx + p.mu);
        let cv = dt * p.nu;
        self.u_tmp.copy_from_slice(&self.u_buf);
        let (u, out) = (&self.u_tmp, &mut self.u_buf);
        match self.g.kind() {
            RoadKind::Zero => road_kernel(u, v0, out, nx, c0, cm, cp, cv, dt, |_| 0.0),
            RoadKind::Mortality { rho } => {
                let rho = *rho;
                road_kernel(u, v0, out, nx, c0, cm, cp, cv, dt, move |_| -rho)
            }
            RoadKind::Logistic { slope, kappa } => {
                let (s, k) = (*slope, *kappa);
                road_kernel(u, v0, out, nx, c0, cm, cp, cv, dt, move |x| {
                    s * (1.0 - x / k)
                })
            }
            _ => {
                let g = self.g;
                road_kernel(u, v0, out, nx, c0, cm, cp, cv, dt, |x| g.per_capita(x))
            }
        }
    }

    fn field_step(&mut self, u: &[f64], v: &[f64], dt: f64) {
        let p = &self.params;
        let cx = dt * p.d / (self.dx * self.dx);
        let cy = dt * p.d / (self.dy * self.dy);
        let coef = FieldCoeffs {
            nx: self.nx,
            ny: self.ny,
            c0: 1.0 - 2.0 * cx - 2.0 * cy,
            c0_road: 1.0 - 2.0 * cx - 2.0 * cy - dt * 2.0 * p.nu / self.dy,
            cx,
            cy,
            cu: dt * 2.0 * p.mu / self.dy,
            dt,
        };
        match self.f.kind() {
            FieldKind::Logistic { r } => {
                let r = *r;
                field_kernel(u, v, &mut self.v_buf, &coef, move |s| r * (1.0 - s))
            }
            _ => {
                let f = self.f;
                field_kernel(u, v, &mut self.v_buf, &coef, |s| f.per_capita(s))
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
#[inline(always)]
fn road_kernel<G: Fn(f64) -> f64>(
    u: &[f64],
    v0: &[f64],
    out: &mut [f64],
    nx: usize,
    c0: f64,
    cm: f64,
    cp: f64,
    cv: f64,
    dt: f64,
    pc: G,
) {
    let cell = |ui: f64, um: f64, up: f64, vi: f64| {
        flush(ui * (c0 + dt * pc(ui)) + cm * um + cp * up + cv * vi)
    };
    out[0] = cell(u[0], u[1], u[1], v0[0]);
    out[nx - 1] = cell(u[nx - 1], u[nx - 2], u[nx - 2], v0[nx - 1]);
    let n = nx - 2;
    let (l, c, r) = (&u[..n], &u[1..n + 1], &u[2..n + 2]);
    let (v, o) = (&v0[1..n + 1], &mut out[1..n + 1]);
    for i in 0..n {
        o[i] = cell(c[i], l[i], r[i], v[i]);
    }
}

struct FieldCoeffs {
    nx: usize,
    ny: usize,
    c0: f64,
    c0_road: f64,
    cx: f64,
    cy: f64,
    cu: f64,
    dt: f64,
}

/// One row of the field update. `coupling` carries the road density and its
/// weight on the row `y = 0`.
#[allow(clippy::too_many_arguments)]
#[inline(always)]
fn field_row<P: Fn(f64) -> f64>(
    out: &mut [f64],
    row: &[f64],
    below: &[f64],
    above: &[f64],
    coupling: (&[f64], f64),
    c0: f64,
    cy_below: f64,
    cy_above: f64,
    k: &FieldCoeffs,
    pc: &P,
) {
    let nx = k.nx;
    let (cx, dt) = (k.cx, k.dt);
    let (u, cu) = coupling;
    let cell = |s: f64, l: f64, r: f64, b: f64, a: f64, ui: f64| {
        flush(s * (c0 + dt * pc(s)) + cx * (l + r) + (cy_below * b + cy_above * a) + cu * ui)
    };
    out[0] = cell(row[0], row[1], row[1], below[0], above[0], u[0]);
    out[nx - 1] = cell(
        row[nx - 1],
        row[nx - 2],
        row[nx - 2],
        below[nx - 1],
        above[nx - 1],
        u[nx - 1],
    );
    let n = nx - 2;
    let (l, c, r) = (&row[..n], &row[1..n + 1], &row[2..n + 2]);
    let (b, a, ui) = (&below[1..n + 1], &above[1..n + 1], &u[1..n + 1]);
    let o = &mut out[1..n + 1];
    for i in 0..n {
        o[i] = cell(c[i], l[i], r[i], b[i], a[i], ui[i]);
    }
}

fn field_kernel<P: Fn(f64) -> f64 + Sync>(
    u: &[f64],
    v: &[f64],
    out: &mut [f64],
    k: &FieldCoeffs,
    pc: P,
) {
    let (nx, ny) = (k.nx, k.ny);
    out.par_chunks_mut(nx).enumerate().for_each(|(j, dst)| {
        let row = &v[j * nx..(j + 1) * nx];
        if j == 0 {
            // Robin ghost row: v_{-1} = v_1 + (2dy/d)(μu - νv_0)
            let above = &v[nx..2 * nx];
            field_row(
                dst,
                row,
                above,
                above,
                (u, k.cu),
                k.c0_road,
                0.0,
                2.0 * k.cy,
                k,
                &pc,
            );
        } else if j == ny - 1 {
            let below = &v[(j - 1) * nx..j * nx];
            field_row(
                dst,
                row,
                below,
                below,
                (u, 0.0),
                k.c0,
                2.0 * k.cy,
                0.0,
                k,
                &pc,
            );
        } else {
            let below = &v[(j - 1) * nx..j * nx];
            let above = &v[(j + 1) * nx..(j + 2) * nx];
            field_row(dst, row, below, above, (u, 0.0), k.c0, k.cy, k.cy, k, &pc);
        }
    });
}
