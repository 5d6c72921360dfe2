//! CAM16 colour appearance model and the CAM16-UCS uniform space.
//!
//! Tristimulus values are on the 0-100 scale, hue angles in degrees.

use serde::{Deserialize, Serialize};

use crate::colorimetry::Tristimulus;
use crate::error::{Error, Result};
use crate::rgb::{invert, mat_vec, Mat3};
use crate::scalar::Scalar;

const M16: [[f64; 3]; 3] = [
    [0.401288, 0.650173, -0.051461],
    [-0.250268, 1.204414, 0.045854],
    [-0.002079, 0.048952, 0.953127],
];

/// UCS coefficients `c1`, `c2`.
const UCS_C1: f64 = 0.007;
const UCS_C2: f64 = 0.0228;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Surround {
    #[default]
    Average,
    Dim,
    Dark,
}

impl Surround {
    /// `(F, c, N_c)`.
    pub fn parameters(self) -> (f64, f64, f64) {
        match self {
            Self::Average => (1.0, 0.69, 1.0),
            Self::Dim => (0.9, 0.59, 0.9),
            Self::Dark => (0.8, 0.525, 0.8),
        }
    }
}

impl std::str::FromStr for Surround {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "average" => Ok(Self::Average),
            "dim" => Ok(Self::Dim),
            "dark" => Ok(Self::Dark),
            other => Err(format!(
                "unknown surround '{other}' (expected average, dim or dark)"
            )),
        }
    }
}

impl std::fmt::Display for Surround {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Average => "average",
            Self::Dim => "dim",
            Self::Dark => "dark",
        })
    }
}

/// Viewing conditions with every derived constant computed once.
#[derive(Clone, Debug, PartialEq)]
pub struct ViewingConditions<T> {
    white: Tristimulus<T>,
    adapting_luminance: T,
    background_luminance: T,
    surround: Surround,
    f: T,
    c: T,
    nc: T,
    d: T,
    fl: T,
    fl_root4: T,
    n: T,
    z: T,
    nbb: T,
    ncb: T,
    d_rgb: [T; 3],
    aw: T,
    m16: Mat3<T>,
    m16_inv: Mat3<T>,
}

fn post_adapt<T: Scalar>(fl: T, x: T) -> T {
    let p = (fl * x.abs() / T::lit(100.0)).powf(T::lit(0.42));
    x.signum() * T::lit(400.0) * p / (p + T::lit(27.13)) + T::lit(0.1)
}

impl<T: Scalar> ViewingConditions<T> {
    /// Degree of adaptation computed from `F` and `L_A`.
    pub fn new(
        white: Tristimulus<T>,
        adapting_luminance: T,
        background_luminance: T,
        surround: Surround,
    ) -> Result<Self> {
        Self::build(
            white,
            adapting_luminance,
            background_luminance,
            surround,
            None,
        )
    }

    /// Explicit degree of adaptation in `[0, 1]`.
    pub fn with_degree_of_adaptation(
        white: Tristimulus<T>,
        adapting_luminance: T,
        background_luminance: T,
        surround: Surround,
        d: T,
    ) -> Result<Self> {
        Self::build(
            white,
            adapting_luminance,
            background_luminance,
            surround,
            Some(d),
        )
    }

    fn build(
        white: Tristimulus<T>,
        la: T,
        yb: T,
        surround: Surround,
        d: Option<T>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidViewingConditions(m));
        if white.validate().is_err() || !(white.y > T::zero()) {
            return bad(format!(
                "white {:?} must be finite with positive Y",
                white.to_array().map(T::as_f64)
            ));
        }
        if !la.is_finite() || la <= T::zero() {
            return bad(format!("adapting luminance {la} must be positive"));
        }
        if !yb.is_finite() || yb <= T::zero() {
            return bad(format!("background luminance {yb} must be positive"));
        }
        let (f, c, nc) = surround.parameters();
        let (f, c, nc) = (T::lit(f), T::lit(c), T::lit(nc));
        let d = match d {
            Some(d) if d.is_finite() && d >= T::zero() && d <= T::one() => d,
            Some(d) => return bad(format!("degree of adaptation {d} outside [0, 1]")),
            None => {
                let d = f
                    * (T::one() - T::lit(1.0 / 3.6) * ((-la - T::lit(42.0)) / T::lit(92.0)).exp());
                d.max(T::zero()).min(T::one())
            }
        };

        let five_la = T::lit(5.0) * la;
        let k = T::one() / (five_la + T::one());
        let k4 = k.powi(4);
        let fl =
            T::lit(0.2) * k4 * five_la + T::lit(0.1) * (T::one() - k4).powi(2) * five_la.cbrt();
        let n = yb / white.y;
        let z = T::lit(1.48) + n.sqrt();
        let nbb = T::lit(0.725) * n.powf(T::lit(-0.2));

        let m16 = M16.map(|row| row.map(T::lit));
        let m16_inv = invert(&m16).expect("CAM16 matrix is invertible");
        let rgb_w = mat_vec(&m16, white.to_array());
        if rgb_w.iter().any(|v| *v <= T::zero()) {
            return bad("white has a non-positive cone response".into());
        }
        let d_rgb = rgb_w.map(|v| d * white.y / v + T::one() - d);
        let mut aw_rgb = [T::zero(); 3];
        for i in 0..3 {
            aw_rgb[i] = post_adapt(fl, d_rgb[i] * rgb_w[i]);
        }
        let aw =
            (T::lit(2.0) * aw_rgb[0] + aw_rgb[1] + aw_rgb[2] / T::lit(20.0) - T::lit(0.305)) * nbb;

        Ok(Self {
            white,
            adapting_luminance: la,
            background_luminance: yb,
            surround,
            f,
            c,
            nc,
            d,
            fl,
            fl_root4: fl.powf(T::lit(0.25)),
            n,
            z,
            nbb,
            ncb: nbb,
            d_rgb,
            aw,
            m16,
            m16_inv,
        })
    }

    pub fn white(&self) -> Tristimulus<T> {
        self.white
    }

    pub fn adapting_luminance(&self) -> T {
        self.adapting_luminance
    }

    pub fn background_luminance(&self) -> T {
        self.background_luminance
    }

    pub fn surround(&self) -> Surround {
        self.surround
    }

    pub fn degree_of_adaptation(&self) -> T {
        self.d
    }

    /// Luminance-level adaptation factor `F_L`.
    pub fn fl(&self) -> T {
        self.fl
    }

    /// Achromatic response of the white.
    pub fn aw(&self) -> T {
        self.aw
    }

    pub fn f(&self) -> T {
        self.f
    }

    fn chroma_factor(&self, j: T) -> T {
        (j / T::lit(100.0)).sqrt() * (T::lit(1.64) - T::lit(0.29).powf(self.n)).powf(T::lit(0.73))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Appearance<T> {
    /// Lightness.
    pub j: T,
    /// Chroma.
    pub c: T,
    /// Hue angle in degrees, `[0, 360)`.
    pub h: T,
    /// Colourfulness.
    pub m: T,
    /// Saturation.
    pub s: T,
    /// Brightness.
    pub q: T,
}

impl<T: Scalar> Appearance<T> {
    /// Completes the correlates from lightness, colourfulness and hue.
    pub fn from_jmh(j: T, m: T, h: T, vc: &ViewingConditions<T>) -> Self {
        let c = m / vc.fl_root4;
        let q =
            (T::lit(4.0) / vc.c) * (j / T::lit(100.0)).sqrt() * (vc.aw + T::lit(4.0)) * vc.fl_root4;
        let s = if q > T::zero() {
            T::lit(100.0) * (m / q).sqrt()
        } else {
            T::zero()
        };
        Self {
            j,
            c,
            h: wrap_hue(h),
            m,
            s,
            q,
        }
    }
}

fn eccentricity<T: Scalar>(h_deg: T) -> T {
    T::lit(0.25) * ((h_deg.to_radians() + T::lit(2.0)).cos() + T::lit(3.8))
}

fn wrap_hue<T: Scalar>(h: T) -> T {
    let full = T::lit(360.0);
    let w = h % full;
    let w = if w < T::zero() { w + full } else { w };
    if w >= full {
        T::zero()
    } else {
        w
    }
}

pub fn xyz_to_cam16<T: Scalar>(
    xyz: Tristimulus<T>,
    vc: &ViewingConditions<T>,
) -> Result<Appearance<T>> {
    let v = xyz.to_array();
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidTristimulus {
            x: xyz.x.as_f64(),
            y: xyz.y.as_f64(),
            z: xyz.z.as_f64(),
        });
    }
    let rgb = mat_vec(&vc.m16, v);
    let mut ra = [T::zero(); 3];
    for i in 0..3 {
        ra[i] = post_adapt(vc.fl, vc.d_rgb[i] * rgb[i]);
    }
    let [r, g, b] = ra;
    let a = r - T::lit(12.0) * g / T::lit(11.0) + b / T::lit(11.0);
    let bb = (r + g - T::lit(2.0) * b) / T::lit(9.0);
    let h = wrap_hue(bb.atan2(a).to_degrees());
    let et = eccentricity(h);

    let achromatic = (T::lit(2.0) * r + g + b / T::lit(20.0) - T::lit(0.305)) * vc.nbb;
    let j = if achromatic > T::zero() {
        T::lit(100.0) * (achromatic / vc.aw).powf(vc.c * vc.z)
    } else {
        T::zero()
    };
    let q = (T::lit(4.0) / vc.c) * (j / T::lit(100.0)).sqrt() * (vc.aw + T::lit(4.0)) * vc.fl_root4;
    let denom = r + g + T::lit(21.0 / 20.0) * b;
    let t = if denom > T::zero() {
        T::lit(50000.0 / 13.0) * vc.nc * vc.ncb * et * (a * a + bb * bb).sqrt() / denom
    } else {
        T::zero()
    };
    let c = t.powf(T::lit(0.9)) * vc.chroma_factor(j);
    let m = c * vc.fl_root4;
    let s = if q > T::zero() {
        T::lit(100.0) * (m / q).sqrt()
    } else {
        T::zero()
    };
    Ok(Appearance { j, c, h, m, s, q })
}

/// Chromatic input of the inverse model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Chromatic<T> {
    Chroma(T),
    Colorfulness(T),
}

pub fn cam16_to_xyz<T: Scalar>(
    j: T,
    chromatic: Chromatic<T>,
    h: T,
    vc: &ViewingConditions<T>,
) -> Result<Tristimulus<T>> {
    let c = match chromatic {
        Chromatic::Chroma(c) => c,
        Chromatic::Colorfulness(m) => m / vc.fl_root4,
    };
    if !j.is_finite() || j < T::zero() || !c.is_finite() || c < T::zero() || !h.is_finite() {
        return Err(Error::NotInvertible(format!("J = {j}, C = {c}, h = {h}")));
    }
    let h = wrap_hue(h);
    let factor = vc.chroma_factor(j);
    let t = if c > T::zero() && factor > T::zero() {
        (c / factor).powf(T::one() / T::lit(0.9))
    } else {
        T::zero()
    };
    let et = eccentricity(h);
    let achromatic = vc.aw * (j / T::lit(100.0)).powf(T::one() / (vc.c * vc.z));
    let p2 = achromatic / vc.nbb + T::lit(0.305);
    let p3 = T::lit(21.0 / 20.0);
    let (sin_h, cos_h) = h.to_radians().sin_cos();
    let l = |v: f64| T::lit(v);

    let (a, b) = if t == T::zero() {
        (T::zero(), T::zero())
    } else {
        let p1 = l(50000.0 / 13.0) * vc.nc * vc.ncb * et / t;
        if sin_h.abs() >= cos_h.abs() {
            let p4 = p1 / sin_h;
            let b = p2 * (l(2.0) + p3) * l(460.0 / 1403.0)
                / (p4 + (l(2.0) + p3) * l(220.0 / 1403.0) * (cos_h / sin_h) - l(27.0 / 1403.0)
                    + p3 * l(6300.0 / 1403.0));
            (b * cos_h / sin_h, b)
        } else {
            let p5 = p1 / cos_h;
            let a = p2 * (l(2.0) + p3) * l(460.0 / 1403.0)
                / (p5 + (l(2.0) + p3) * l(220.0 / 1403.0)
                    - (l(27.0 / 1403.0) - p3 * l(6300.0 / 1403.0)) * (sin_h / cos_h));
            (a, a * sin_h / cos_h)
        }
    };

    let ra = [
        (l(460.0) * p2 + l(451.0) * a + l(288.0) * b) / l(1403.0),
        (l(460.0) * p2 - l(891.0) * a - l(261.0) * b) / l(1403.0),
        (l(460.0) * p2 - l(220.0) * a - l(6300.0) * b) / l(1403.0),
    ];
    let mut rgb = [T::zero(); 3];
    for i in 0..3 {
        let x = ra[i] - l(0.1);
        if !x.is_finite() || x < T::zero() || x.abs() >= l(400.0) {
            return Err(Error::NotInvertible(format!(
                "post-adaptation response {} outside the invertible range",
                ra[i]
            )));
        }
        let rc = x.signum()
            * (l(100.0) / vc.fl)
            * (l(27.13) * x.abs() / (l(400.0) - x.abs())).powf(l(1.0 / 0.42));
        rgb[i] = rc / vc.d_rgb[i];
    }
    Ok(Tristimulus::from_array(mat_vec(&vc.m16_inv, rgb)))
}

/// Point in CAM16-UCS.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UcsPoint<T> {
    pub j_prime: T,
    pub a_prime: T,
    pub b_prime: T,
}

impl<T: Scalar> UcsPoint<T> {
    /// `M'`, the radial coordinate.
    pub fn m_prime(&self) -> T {
        self.a_prime.hypot(self.b_prime)
    }

    pub fn hue(&self) -> T {
        wrap_hue(self.b_prime.atan2(self.a_prime).to_degrees())
    }
}

pub fn lightness_to_ucs<T: Scalar>(j: T) -> T {
    T::lit(1.7) * j / (T::one() + T::lit(UCS_C1) * j)
}

pub fn ucs_to_lightness<T: Scalar>(j_prime: T) -> T {
    j_prime / (T::lit(1.7) - T::lit(UCS_C1) * j_prime)
}

pub fn colorfulness_to_ucs<T: Scalar>(m: T) -> T {
    (T::one() + T::lit(UCS_C2) * m).ln() / T::lit(UCS_C2)
}

pub fn ucs_to_colorfulness<T: Scalar>(m_prime: T) -> T {
    ((T::lit(UCS_C2) * m_prime).exp() - T::one()) / T::lit(UCS_C2)
}

pub fn to_ucs<T: Scalar>(app: &Appearance<T>) -> UcsPoint<T> {
    let mp = colorfulness_to_ucs(app.m);
    let (sin_h, cos_h) = app.h.to_radians().sin_cos();
    UcsPoint {
        j_prime: lightness_to_ucs(app.j),
        a_prime: mp * cos_h,
        b_prime: mp * sin_h,
    }
}

/// `(J, M, h)` from a UCS point.
pub fn from_ucs<T: Scalar>(p: &UcsPoint<T>) -> (T, T, T) {
    (
        ucs_to_lightness(p.j_prime),
        ucs_to_colorfulness(p.m_prime()),
        p.hue(),
    )
}

pub fn ucs_to_xyz<T: Scalar>(p: &UcsPoint<T>, vc: &ViewingConditions<T>) -> Result<Tristimulus<T>> {
    let (j, m, h) = from_ucs(p);
    cam16_to_xyz(j, Chromatic::Colorfulness(m), h, vc)
}

pub fn delta_e_ucs<T: Scalar>(a: &UcsPoint<T>, b: &UcsPoint<T>) -> T {
    let d = [
        a.j_prime - b.j_prime,
        a.a_prime - b.a_prime,
        a.b_prime - b.b_prime,
    ];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}
