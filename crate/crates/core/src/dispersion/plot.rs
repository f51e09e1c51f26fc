//! SVG rendering of `S(c)` and `G(c)` in the `(β, α)` plane.

use std::fmt::Write as _;

use super::{beta_lower, circle_raw, sigma_raw, GapMinimum, Linearization, DEFAULT_BETA_SAMPLES};
use crate::error::{Error, Result};
use crate::model::{FieldReaction, ModelParams, RoadReaction};
use crate::numeric::linspace;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;
const CURVE_POINTS: usize = 400;
const AREA_POINTS: usize = 4000;

/// A rendered figure plus the numbers it shows.
#[derive(Clone, Debug)]
pub struct GeometryPlot {
    pub c: f64,
    pub c_kpp: f64,
    pub svg: String,
    /// Area of `S(c) ∩ G(c)`, by the trapezoid rule in `β`.
    pub overlap_area: f64,
    /// Closest approach (or deepest overlap) of the two sets.
    pub min_gap: Option<GapMinimum>,
}

struct Frame {
    b0: f64,
    b1: f64,
    a0: f64,
    a1: f64,
}

impl Frame {
    fn x(&self, beta: f64) -> f64 {
        MARGIN + (beta - self.b0) / (self.b1 - self.b0) * (WIDTH - 2.0 * MARGIN)
    }
    fn y(&self, alpha: f64) -> f64 {
        HEIGHT - MARGIN - (alpha - self.a0) / (self.a1 - self.a0) * (HEIGHT - 2.0 * MARGIN)
    }
    fn clip(&self, alpha: f64) -> f64 {
        let pad = 0.05 * (self.a1 - self.a0);
        alpha.clamp(self.a0 - pad, self.a1 + pad)
    }
}

fn polyline(out: &mut String, frame: &Frame, pts: &[(f64, f64)], style: &str) {
    if pts.len() < 2 {
        return;
    }
    let _ = write!(out, "<polyline fill=\"none\" {style} points=\"");
    for &(b, a) in pts {
        let _ = write!(out, "{:.2},{:.2} ", frame.x(b), frame.y(frame.clip(a)));
    }
    out.push_str("\"/>\n");
}

/// Draw `Σ±(c)`, `Γ(c)` and their overlap for rightward propagation.
pub fn plot_geometry(
    params: &ModelParams,
    f: &FieldReaction,
    g: &RoadReaction,
    c: f64,
) -> Result<GeometryPlot> {
    let lin = Linearization::new(params, f.f_prime_0(), g.g_prime_0())?;
    if !(c >= lin.c_kpp) || !c.is_finite() {
        return Err(Error::invalid("c", c, "must be at least the KPP speed"));
    }
    let p = &lin.params;
    let gp = lin.g_prime_0;
    let r = ((c - lin.c_kpp) * (c + lin.c_kpp)).sqrt() / (2.0 * p.d);
    let centre = c / (2.0 * p.d);
    let beta_lo = beta_lower(p, gp, c);

    let span = (2.0 * r).max(centre).max(1.0);
    let b0 = (-r - 0.25 * span).max(-p.nu / p.d + 1e-9);
    let b0 = beta_lo.map_or(b0, |bl| b0.min(bl));
    let b1 = r + 0.5 * span;
    let a0 = (centre - r).min(0.0) - 0.25 * span;
    let a1 = centre + r + 0.25 * span;
    let frame = Frame { b0, b1, a0, a1 };

    let mut sigma_lo = Vec::new();
    let mut sigma_hi = Vec::new();
    if let Some(bl) = beta_lo {
        for beta in linspace(bl.max(b0), b1, CURVE_POINTS) {
            if let Some((lo, hi)) = sigma_raw(p, gp, c, beta) {
                sigma_lo.push((beta, lo));
                sigma_hi.push((beta, hi));
            }
        }
    }
    let circle: Vec<(f64, f64)> = (0..=360)
        .map(|k| {
            let t = k as f64 * std::f64::consts::PI / 180.0;
            (r * t.cos(), centre + r * t.sin())
        })
        .collect();

    // overlap sections along β ∈ [-r, r]
    let sections: Vec<(f64, Option<(f64, f64)>)> = if r > 0.0 {
        linspace(-r, r, AREA_POINTS)
            .into_iter()
            .map(|beta| {
                let both = match (sigma_raw(p, gp, c, beta), circle_raw(p, c, lin.c_kpp, beta)) {
                    (Some((a, b)), Some((e, f))) => {
                        let lo = a.max(e);
                        let hi = b.min(f);
                        (lo < hi).then_some((lo, hi))
                    }
                    _ => None,
                };
                (beta, both)
            })
            .collect()
    } else {
        Vec::new()
    };
    let width = |s: &Option<(f64, f64)>| s.map_or(0.0, |(lo, hi)| hi - lo);
    let overlap_area: f64 = sections
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (width(&w[0].1) + width(&w[1].1)))
        .sum();

    let min_gap = lin.min_gap(c, DEFAULT_BETA_SAMPLES);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // shaded overlap, one polygon per connected run
    let mut run: Vec<(f64, f64, f64)> = Vec::new();
    let flush = |run: &mut Vec<(f64, f64, f64)>, svg: &mut String| {
        if run.len() >= 2 {
            let _ = write!(
                svg,
                "<polygon fill=\"#f4a261\" fill-opacity=\"0.6\" stroke=\"none\" points=\""
            );
            for &(b, lo, _) in run.iter() {
                let _ = write!(svg, "{:.2},{:.2} ", frame.x(b), frame.y(lo));
            }
            for &(b, _, hi) in run.iter().rev() {
                let _ = write!(svg, "{:.2},{:.2} ", frame.x(b), frame.y(hi));
            }
            svg.push_str("\"/>\n");
        }
        run.clear();
    };
    for (beta, s) in &sections {
        match s {
            Some((lo, hi)) => run.push((*beta, *lo, *hi)),
            None => flush(&mut run, &mut svg),
        }
    }
    flush(&mut run, &mut svg);

    let axis = "stroke=\"#888\" stroke-width=\"1\"";
    if a0 <= 0.0 && 0.0 <= a1 {
        let y = frame.y(0.0);
        let _ = writeln!(
            svg,
            "<line x1=\"{MARGIN}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" {axis}/>",
            WIDTH - MARGIN
        );
    }
    if b0 <= 0.0 && 0.0 <= b1 {
        let x = frame.x(0.0);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{MARGIN}\" x2=\"{x:.2}\" y2=\"{:.2}\" {axis}/>",
            HEIGHT - MARGIN
        );
    }

    polyline(
        &mut svg,
        &frame,
        &sigma_lo,
        "stroke=\"#264653\" stroke-width=\"2\"",
    );
    polyline(
        &mut svg,
        &frame,
        &sigma_hi,
        "stroke=\"#264653\" stroke-width=\"2\"",
    );
    polyline(
        &mut svg,
        &frame,
        &circle,
        "stroke=\"#e76f51\" stroke-width=\"2\"",
    );

    if let Some(m) = min_gap.filter(|m| m.alpha.is_finite()) {
        let _ = writeln!(
            svg,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"black\"/>",
            frame.x(m.beta),
            frame.y(frame.clip(m.alpha))
        );
    }

    let font = "font-family=\"sans-serif\" font-size=\"13\"";
    let _ = writeln!(
        svg,
        "<text x=\"{MARGIN}\" y=\"24\" {font}>c = {c:.6}, c_K = {:.6}, overlap area = {overlap_area:.3e}</text>",
        lin.c_kpp
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" {font}>β</text>",
        WIDTH - MARGIN + 8.0,
        HEIGHT - MARGIN
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" {font}>α</text>",
        MARGIN - 16.0,
        MARGIN
    );
    let _ = writeln!(
        svg,
        "<text x=\"{MARGIN}\" y=\"{:.2}\" {font}>β ∈ [{b0:.3}, {b1:.3}], α ∈ [{a0:.3}, {a1:.3}]</text>",
        HEIGHT - 12.0
    );
    svg.push_str("</svg>\n");

    Ok(GeometryPlot {
        c,
        c_kpp: lin.c_kpp,
        svg,
        overlap_area,
        min_gap,
    })
}
