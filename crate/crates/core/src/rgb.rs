//! Additive RGB display systems (HDTV primaries by default) and target colors
//! expressed as linear RGB weights.

use serde::{Deserialize, Serialize};

use crate::colorimetry::{luminance_to_percent, xyz_to_chromaticity, Chromaticity, Tristimulus};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub(crate) type Mat3<T> = [[T; 3]; 3];

pub(crate) fn mat_vec<T: Scalar>(m: &Mat3<T>, v: [T; 3]) -> [T; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

pub(crate) fn determinant<T: Scalar>(m: &Mat3<T>) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub(crate) fn invert<T: Scalar>(m: &Mat3<T>) -> Option<Mat3<T>> {
    let det = determinant(m);
    if det.abs() <= T::epsilon() || !det.is_finite() {
        return None;
    }
    let inv = T::one() / det;
    let c =
        |r0: usize, c0: usize, r1: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    Some([
        [
            c(1, 1, 2, 2) * inv,
            -c(0, 1, 2, 2) * inv,
            c(0, 1, 1, 2) * inv,
        ],
        [
            -c(1, 0, 2, 2) * inv,
            c(0, 0, 2, 2) * inv,
            -c(0, 0, 1, 2) * inv,
        ],
        [
            c(1, 0, 2, 1) * inv,
            -c(0, 0, 2, 1) * inv,
            c(0, 0, 1, 1) * inv,
        ],
    ])
}

/// Display primaries, white point and peak white luminance.
///
/// The RGB to XYZ matrix is normalized so that `rgb = (1, 1, 1)` maps to the
/// white point with `Y = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DisplayGamut<T> {
    primaries: [Chromaticity<T>; 3],
    white: Chromaticity<T>,
    white_luminance: T,
    rgb_to_xyz: Mat3<T>,
    xyz_to_rgb: Mat3<T>,
}

impl<T: Scalar> DisplayGamut<T> {
    pub fn new(
        primaries: [Chromaticity<T>; 3],
        white: Chromaticity<T>,
        white_luminance: T,
    ) -> Result<Self> {
        if !(white_luminance > T::zero()) || !white_luminance.is_finite() {
            return Err(Error::DegenerateGamut(format!(
                "white luminance must be positive, got {white_luminance}"
            )));
        }
        // Columns are the primaries' xyz at unit Y scale.
        let p: Mat3<T> = [
            [
                primaries[0].x / primaries[0].y,
                primaries[1].x / primaries[1].y,
                primaries[2].x / primaries[2].y,
            ],
            [T::one(), T::one(), T::one()],
            [
                primaries[0].z / primaries[0].y,
                primaries[1].z / primaries[1].y,
                primaries[2].z / primaries[2].y,
            ],
        ];
        let p_inv =
            invert(&p).ok_or_else(|| Error::DegenerateGamut("primaries are collinear".into()))?;
        if !triangle_contains(&primaries, white.x, white.y, T::zero()) {
            return Err(Error::DegenerateGamut(
                "white point outside the primaries triangle".into(),
            ));
        }
        let w = [white.x / white.y, T::one(), white.z / white.y];
        let s = mat_vec(&p_inv, w);
        let rgb_to_xyz = [
            [p[0][0] * s[0], p[0][1] * s[1], p[0][2] * s[2]],
            [p[1][0] * s[0], p[1][1] * s[1], p[1][2] * s[2]],
            [p[2][0] * s[0], p[2][1] * s[1], p[2][2] * s[2]],
        ];
        let xyz_to_rgb = invert(&rgb_to_xyz)
            .ok_or_else(|| Error::DegenerateGamut("singular RGB matrix".into()))?;
        Ok(Self {
            primaries,
            white,
            white_luminance,
            rgb_to_xyz,
            xyz_to_rgb,
        })
    }

    /// HDTV primaries with the nominal D65 white (0.3127, 0.3290), 100 cd/m^2.
    pub fn rec709() -> Self {
        Self::rec709_with_white(
            Chromaticity::new(T::lit(0.3127), T::lit(0.3290)).expect("valid white"),
        )
    }

    /// HDTV primaries balanced to an arbitrary white chromaticity.
    pub fn rec709_with_white(white: Chromaticity<T>) -> Self {
        let c = |x: f64, y: f64| Chromaticity::new(T::lit(x), T::lit(y)).expect("valid primary");
        Self::new(
            [c(0.64, 0.33), c(0.30, 0.60), c(0.15, 0.06)],
            white,
            T::lit(100.0),
        )
        .expect("HDTV primaries are valid")
    }

    pub fn with_white_luminance(mut self, white_luminance: T) -> Result<Self> {
        if !(white_luminance > T::zero()) {
            return Err(Error::DegenerateGamut(
                "white luminance must be positive".into(),
            ));
        }
        self.white_luminance = white_luminance;
        Ok(self)
    }

    pub fn primaries(&self) -> &[Chromaticity<T>; 3] {
        &self.primaries
    }

    pub fn white(&self) -> Chromaticity<T> {
        self.white
    }

    pub fn white_luminance(&self) -> T {
        self.white_luminance
    }

    /// Luma coefficients: the Y row of the RGB to XYZ matrix.
    pub fn luma_coefficients(&self) -> [T; 3] {
        self.rgb_to_xyz[1]
    }

    /// Linear RGB to XYZ with white at `Y = 1`.
    pub fn rgb_to_xyz(&self, rgb: [T; 3]) -> [T; 3] {
        mat_vec(&self.rgb_to_xyz, rgb)
    }

    /// XYZ (white at `Y = 1`) to linear RGB.
    pub fn xyz_to_rgb(&self, xyz: [T; 3]) -> [T; 3] {
        mat_vec(&self.xyz_to_rgb, xyz)
    }

    /// Linear RGB drive for a stimulus whose `Y` is in the units of
    /// [`white_luminance`](Self::white_luminance).
    pub fn stimulus_to_rgb(&self, xyz: Tristimulus<T>) -> [T; 3] {
        self.xyz_to_rgb(xyz.scale(T::one() / self.white_luminance).to_array())
    }

    /// Inverse of [`stimulus_to_rgb`](Self::stimulus_to_rgb).
    pub fn rgb_to_stimulus(&self, rgb: [T; 3]) -> Tristimulus<T> {
        Tristimulus::from_array(self.rgb_to_xyz(rgb)).scale(self.white_luminance)
    }

    /// True iff the stimulus is reproducible: every channel within `[0, 1]`
    /// up to `1e-9`.
    pub fn contains(&self, xyz: Tristimulus<T>) -> bool {
        let tol = T::lit(1e-9);
        xyz.y <= self.white_luminance * (T::one() + tol)
            && self
                .stimulus_to_rgb(xyz)
                .iter()
                .all(|&c| c >= -tol && c <= T::one() + tol)
    }

    /// Whether `c` lies inside or on the primaries triangle.
    pub fn contains_chromaticity(&self, c: &Chromaticity<T>, tol: T) -> bool {
        triangle_contains(&self.primaries, c.x, c.y, tol)
    }

    /// Target color for linear RGB weights.
    pub fn target(&self, name: impl Into<String>, rgb_weights: [T; 3]) -> Result<TargetColor<T>> {
        let valid = rgb_weights.iter().all(|w| w.is_finite() && *w >= T::zero());
        if !valid || rgb_weights.iter().all(|w| *w == T::zero()) {
            return Err(Error::InvalidWeights(rgb_weights.map(|w| w.as_f64())));
        }
        let xyz = Tristimulus::from_array(self.rgb_to_xyz(rgb_weights));
        let chromaticity = xyz_to_chromaticity(xyz)?;
        Ok(TargetColor {
            name: name.into(),
            rgb_weights,
            chromaticity,
            luminance: xyz.y,
        })
    }
}

fn triangle_contains<T: Scalar>(tri: &[Chromaticity<T>; 3], x: T, y: T, tol: T) -> bool {
    let edge = |a: &Chromaticity<T>, b: &Chromaticity<T>| {
        (b.x - a.x) * (y - a.y) - (b.y - a.y) * (x - a.x)
    };
    let d0 = edge(&tri[0], &tri[1]);
    let d1 = edge(&tri[1], &tri[2]);
    let d2 = edge(&tri[2], &tri[0]);
    let neg = d0 < -tol || d1 < -tol || d2 < -tol;
    let pos = d0 > tol || d1 > tol || d2 > tol;
    !(neg && pos)
}

/// Named reference color given by linear RGB weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetColor<T> {
    pub name: String,
    pub rgb_weights: [T; 3],
    pub chromaticity: Chromaticity<T>,
    /// Relative luminance on the TV scale (white = 1).
    pub luminance: T,
}

impl<T: Scalar> TargetColor<T> {
    /// Tristimulus on the colorimetric 0-100 scale.
    pub fn xyz(&self) -> Tristimulus<T> {
        Tristimulus::from_chromaticity(self.chromaticity, luminance_to_percent(self.luminance))
    }
}

/// Target color under the nominal HDTV system.
pub fn target_from_weights<T: Scalar>(rgb_weights: [T; 3]) -> Result<TargetColor<T>> {
    DisplayGamut::rec709().target("", rgb_weights)
}
