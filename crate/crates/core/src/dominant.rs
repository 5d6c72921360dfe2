//! Dominant wavelength: where the ray from the white point through a color
//! leaves the chromaticity diagram.

use serde::{Deserialize, Serialize};

use crate::colorimetry::Chromaticity;
use crate::error::{Error, Result};
use crate::observer::ObserverTables;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "wavelength_nm", rename_all = "lowercase")]
pub enum DominantWavelength<T> {
    /// The ray meets the spectral locus at this wavelength.
    Dominant(T),
    /// The ray exits through the purple line; the value is the complementary
    /// wavelength hit by the opposite ray.
    Complementary(T),
}

impl<T: Scalar> DominantWavelength<T> {
    pub fn dominant(&self) -> Option<T> {
        match self {
            Self::Dominant(w) => Some(*w),
            Self::Complementary(_) => None,
        }
    }

    pub fn is_complementary(&self) -> bool {
        matches!(self, Self::Complementary(_))
    }
}

/// Ray/segment intersection. Returns `(t, s)` with the hit at `origin + t*dir`
/// and `s` in `[0, 1]` along `a -> b`.
fn intersect<T: Scalar>(origin: (T, T), dir: (T, T), a: (T, T), b: (T, T)) -> Option<(T, T)> {
    let e = (b.0 - a.0, b.1 - a.1);
    let denom = dir.0 * e.1 - dir.1 * e.0;
    if denom.abs() <= T::epsilon() {
        return None;
    }
    let w = (a.0 - origin.0, a.1 - origin.1);
    let t = (w.0 * e.1 - w.1 * e.0) / denom;
    let s = (w.0 * dir.1 - w.1 * dir.0) / denom;
    (s >= T::zero() && s <= T::one()).then_some((t, s))
}

/// Nearest boundary crossing of the ray `white + t*dir`, `t > 0`.
/// `Ok(Some(wavelength))` for the locus, `Ok(None)` for the purple line.
fn first_crossing<T: Scalar>(
    locus: &[(u32, Chromaticity<T>)],
    white: (T, T),
    dir: (T, T),
) -> Option<Option<T>> {
    let mut best: Option<(T, Option<T>)> = None;
    let mut consider = |t: T, hit: Option<T>| {
        if t > T::zero() && best.is_none_or(|(bt, _)| t < bt) {
            best = Some((t, hit));
        }
    };
    for pair in locus.windows(2) {
        let (w0, c0) = pair[0];
        let (w1, c1) = pair[1];
        if let Some((t, s)) = intersect(white, dir, c0.xy(), c1.xy()) {
            let w0 = T::lit(f64::from(w0));
            let w1 = T::lit(f64::from(w1));
            consider(t, Some(w0 + (w1 - w0) * s));
        }
    }
    let (first, last) = (locus[0].1, locus[locus.len() - 1].1);
    if let Some((t, _)) = intersect(white, dir, first.xy(), last.xy()) {
        consider(t, None);
    }
    best.map(|(_, hit)| hit)
}

pub fn dominant_wavelength<T: Scalar>(
    c: &Chromaticity<T>,
    white: &Chromaticity<T>,
    tables: &ObserverTables<T>,
) -> Result<DominantWavelength<T>> {
    if c.xy_distance(white) < T::lit(1e-6) {
        return Err(Error::CoincidentWithWhite);
    }
    let locus = tables.spectral_locus();
    let origin = white.xy();
    let dir = (c.x - white.x, c.y - white.y);
    match first_crossing(&locus, origin, dir) {
        Some(Some(w)) => Ok(DominantWavelength::Dominant(w)),
        Some(None) => {
            let back = (-dir.0, -dir.1);
            match first_crossing(&locus, origin, back) {
                Some(Some(w)) => Ok(DominantWavelength::Complementary(w)),
                _ => Err(Error::UnreachableTarget {
                    x: c.x.as_f64(),
                    y: c.y.as_f64(),
                }),
            }
        }
        None => Err(Error::UnreachableTarget {
            x: c.x.as_f64(),
            y: c.y.as_f64(),
        }),
    }
}

/// Whether `c` lies inside (or on) the region bounded by the spectral locus
/// and the purple line.
pub fn inside_spectral_locus<T: Scalar>(c: &Chromaticity<T>, tables: &ObserverTables<T>) -> bool {
    let locus = tables.spectral_locus();
    let (px, py) = c.xy();
    let n = locus.len();
    let mut inside = false;
    for i in 0..n {
        let (ax, ay) = locus[i].1.xy();
        let (bx, by) = locus[(i + 1) % n].1.xy();
        // points on an edge count as inside
        let cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
        let within = (px - ax) * (px - bx) <= T::zero() && (py - ay) * (py - by) <= T::zero();
        if cross.abs() <= T::lit(1e-12) && within {
            return true;
        }
        if (ay > py) != (by > py) && px < ax + (py - ay) * (bx - ax) / (by - ay) {
            inside = !inside;
        }
    }
    inside
}
