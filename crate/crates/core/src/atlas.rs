//! Constant-lightness colour atlases: a square lattice in the CAM16-UCS
//! `(a', b')` plane, kept where the colour is reproducible on the display.

use std::fmt::Write as _;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::cam16::{
    cam16_to_xyz, lightness_to_ucs, ucs_to_colorfulness, Appearance, Chromatic, UcsPoint,
    ViewingConditions,
};
use crate::chart::rec709_oetf;
use crate::colorimetry::{xyz_to_chromaticity, Chromaticity, Tristimulus};
use crate::error::{Error, Result};
use crate::rgb::DisplayGamut;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct AtlasSpec<T> {
    pub viewing_conditions: ViewingConditions<T>,
    /// CAM16 lightness `J` shared by every sample.
    pub lightness: T,
    /// Lattice pitch in `a'` and `b'`.
    pub spacing: T,
    pub gamut: DisplayGamut<T>,
    /// Lattice extent: `|a'|, |b'| <= bound`.
    pub bound: T,
}

impl<T: Scalar> AtlasSpec<T> {
    /// Spacing 2 and bound 60 on the HDTV display.
    pub fn new(viewing_conditions: ViewingConditions<T>, lightness: T) -> Self {
        Self {
            viewing_conditions,
            lightness,
            spacing: T::lit(2.0),
            gamut: DisplayGamut::rec709(),
            bound: T::lit(60.0),
        }
    }

    pub fn with_spacing(mut self, spacing: T) -> Self {
        self.spacing = spacing;
        self
    }

    pub fn with_gamut(mut self, gamut: DisplayGamut<T>) -> Self {
        self.gamut = gamut;
        self
    }

    pub fn with_bound(mut self, bound: T) -> Self {
        self.bound = bound;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AtlasPoint<T> {
    pub ucs: UcsPoint<T>,
    pub appearance: Appearance<T>,
    pub xyz: Tristimulus<T>,
    pub chromaticity: Chromaticity<T>,
    /// Linear display drive values in `[0, 1]`.
    pub rgb_linear: [T; 3],
}

impl<T: Scalar> AtlasPoint<T> {
    pub fn a_m_prime(&self) -> T {
        self.ucs.a_prime
    }

    pub fn b_m_prime(&self) -> T {
        self.ucs.b_prime
    }

    pub fn m_prime(&self) -> T {
        self.ucs.m_prime()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Atlas<T> {
    pub lightness: T,
    /// Ordered by `b'`, then `a'`.
    pub points: Vec<AtlasPoint<T>>,
    /// Lattice nodes where the inverse model had no solution.
    pub inversion_failures: usize,
}

enum Node<T> {
    Kept(AtlasPoint<T>),
    OutOfGamut,
    NotInvertible,
}

fn evaluate<T: Scalar>(spec: &AtlasSpec<T>, a: T, b: T) -> Node<T> {
    let vc = &spec.viewing_conditions;
    let m = ucs_to_colorfulness(a.hypot(b));
    let h = b.atan2(a).to_degrees();
    let Ok(xyz) = cam16_to_xyz(spec.lightness, Chromatic::Colorfulness(m), h, vc) else {
        return Node::NotInvertible;
    };
    if !spec.gamut.contains(xyz) {
        return Node::OutOfGamut;
    }
    let Ok(chromaticity) = xyz_to_chromaticity(xyz) else {
        return Node::OutOfGamut;
    };
    Node::Kept(AtlasPoint {
        ucs: UcsPoint {
            j_prime: lightness_to_ucs(spec.lightness),
            a_prime: a,
            b_prime: b,
        },
        appearance: Appearance::from_jmh(spec.lightness, m, h, vc),
        xyz,
        chromaticity,
        rgb_linear: spec
            .gamut
            .stimulus_to_rgb(xyz)
            .map(|c| c.max(T::zero()).min(T::one())),
    })
}

/// Samples the lattice and keeps in-gamut colours. Deterministic for a given
/// spec regardless of thread count.
pub fn generate_atlas<T: Scalar>(spec: &AtlasSpec<T>) -> Result<Atlas<T>> {
    if !spec.spacing.is_finite() || spec.spacing <= T::zero() {
        return Err(Error::InvalidParams(format!(
            "atlas spacing {} must be positive",
            spec.spacing
        )));
    }
    if !spec.bound.is_finite() || spec.bound < T::zero() {
        return Err(Error::InvalidParams(format!(
            "atlas bound {} must be non-negative",
            spec.bound
        )));
    }
    if !spec.lightness.is_finite() || spec.lightness <= T::zero() || spec.lightness >= T::lit(100.0)
    {
        return Err(Error::InvalidParams(format!(
            "atlas lightness {} outside (0, 100)",
            spec.lightness
        )));
    }
    let steps = (spec.bound / spec.spacing + T::lit(1e-9))
        .floor()
        .to_i64()
        .unwrap_or(0);
    let rows: Vec<(Vec<AtlasPoint<T>>, usize)> = (-steps..=steps)
        .into_par_iter()
        .map(|jb| {
            let b = T::lit(jb as f64) * spec.spacing;
            let mut kept = Vec::new();
            let mut failures = 0;
            for ia in -steps..=steps {
                let a = T::lit(ia as f64) * spec.spacing;
                match evaluate(spec, a, b) {
                    Node::Kept(p) => kept.push(p),
                    Node::NotInvertible => failures += 1,
                    Node::OutOfGamut => {}
                }
            }
            (kept, failures)
        })
        .collect();
    let inversion_failures = rows.iter().map(|r| r.1).sum();
    Ok(Atlas {
        lightness: spec.lightness,
        points: rows.into_iter().flat_map(|r| r.0).collect(),
        inversion_failures,
    })
}

pub fn atlas_to_xy<T: Scalar>(atlas: &Atlas<T>) -> Vec<Chromaticity<T>> {
    atlas.points.iter().map(|p| p.chromaticity).collect()
}

pub const ATLAS_CSV_HEADER: [&str; 11] = [
    "J",
    "a_m_prime",
    "b_m_prime",
    "X",
    "Y",
    "Z",
    "x",
    "y",
    "R_lin",
    "G_lin",
    "B_lin",
];

impl<T: Scalar> Atlas<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest `M'` among the kept points.
    pub fn max_radius(&self) -> T {
        self.points
            .iter()
            .map(AtlasPoint::m_prime)
            .fold(T::zero(), T::max)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(ATLAS_CSV_HEADER)?;
        for p in &self.points {
            let v = [
                p.appearance.j,
                p.ucs.a_prime,
                p.ucs.b_prime,
                p.xyz.x,
                p.xyz.y,
                p.xyz.z,
                p.chromaticity.x,
                p.chromaticity.y,
                p.rgb_linear[0],
                p.rgb_linear[1],
                p.rgb_linear[2],
            ];
            w.write_record(v.iter().map(|x| format!("{:.9}", x.as_f64())))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Scatter plot of the `(a', b')` plane, each dot filled with its colour.
    pub fn to_svg(&self, bound: T) -> String {
        let half = bound.as_f64().max(1.0);
        let size = 600.0;
        let scale = size / (2.0 * half);
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
        );
        let _ = writeln!(
            svg,
            r##"<rect width="100%" height="100%" fill="#808080"/>"##
        );
        let c = size / 2.0;
        let _ = writeln!(
            svg,
            r#"<path d="M0 {c} H{size} M{c} 0 V{size}" stroke="black" stroke-width="0.5"/>"#
        );
        let r = (scale * 0.45).max(0.5);
        for p in &self.points {
            let x = c + p.ucs.a_prime.as_f64() * scale;
            let y = c - p.ucs.b_prime.as_f64() * scale;
            dot(&mut svg, x, y, r, p.rgb_linear);
        }
        svg.push_str("</svg>\n");
        svg
    }

    /// Scatter plot of the projected chromaticities over the gamut triangle.
    pub fn to_svg_xy(&self, gamut: &DisplayGamut<T>) -> String {
        let size = 600.0;
        // x in [0, 0.8], y in [0, 0.9]
        let sx = |x: f64| 20.0 + x / 0.8 * (size - 40.0);
        let sy = |y: f64| size - 20.0 - y / 0.9 * (size - 40.0);
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
        );
        let _ = writeln!(
            svg,
            r##"<rect width="100%" height="100%" fill="#808080"/>"##
        );
        let tri: Vec<String> = gamut
            .primaries()
            .iter()
            .map(|p| format!("{:.2},{:.2}", sx(p.x.as_f64()), sy(p.y.as_f64())))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polygon points="{}" fill="none" stroke="black" stroke-width="0.8"/>"#,
            tri.join(" ")
        );
        for p in &self.points {
            dot(
                &mut svg,
                sx(p.chromaticity.x.as_f64()),
                sy(p.chromaticity.y.as_f64()),
                1.5,
                p.rgb_linear,
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn dot<T: Scalar>(svg: &mut String, x: f64, y: f64, r: f64, rgb: [T; 3]) {
    let [rr, gg, bb] = rgb.map(|v| (rec709_oetf(v.as_f64()) * 255.0).round() as u8);
    let _ = writeln!(
        svg,
        r##"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="#{rr:02x}{gg:02x}{bb:02x}"/>"##
    );
}
