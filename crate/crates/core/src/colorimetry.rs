//! Tristimulus values, chromaticity coordinates and the xyz distance used as the
//! optimal-color objective.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// CIE XYZ tristimulus values. `y` is on the 0-100 scale unless stated otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tristimulus<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Tristimulus<T> {
    /// Validating constructor: components finite and non-negative.
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        let t = Self { x, y, z };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.x, self.y, self.z]
            .iter()
            .all(|c| c.is_finite() && *c >= T::zero());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidTristimulus {
                x: self.x.as_f64(),
                y: self.y.as_f64(),
                z: self.z.as_f64(),
            })
        }
    }

    pub fn zero() -> Self {
        Self {
            x: T::zero(),
            y: T::zero(),
            z: T::zero(),
        }
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array([x, y, z]: [T; 3]) -> Self {
        Self { x, y, z }
    }

    pub fn scale(self, alpha: T) -> Self {
        Self {
            x: self.x * alpha,
            y: self.y * alpha,
            z: self.z * alpha,
        }
    }

    pub fn sum(self) -> T {
        self.x + self.y + self.z
    }

    /// Tristimulus with luminance `y` and the given chromaticity.
    pub fn from_chromaticity(c: Chromaticity<T>, y: T) -> Self {
        let scale = y / c.y;
        Self {
            x: c.x * scale,
            y,
            z: c.z * scale,
        }
    }
}

impl<T: Scalar> std::ops::Add for Tristimulus<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
            z: self.z + rhs.z,
        }
    }
}

/// Chromaticity coordinates; `x + y + z = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chromaticity<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Chromaticity<T> {
    /// From the `(x, y)` projection; `z` is implied.
    pub fn new(x: T, y: T) -> Result<Self> {
        let c = Self {
            x,
            y,
            z: T::one() - x - y,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: T| v.is_finite() && v >= T::zero() && v <= T::one();
        let tol = T::epsilon() * T::lit(16.0);
        let sum_ok = (self.x + self.y + self.z - T::one()).abs() <= tol;
        if unit(self.x) && unit(self.y) && unit(self.z) && sum_ok {
            Ok(())
        } else {
            Err(Error::InvalidChromaticity {
                x: self.x.as_f64(),
                y: self.y.as_f64(),
                z: self.z.as_f64(),
            })
        }
    }

    pub fn xy(&self) -> (T, T) {
        (self.x, self.y)
    }

    /// Euclidean distance in the `(x, y)` plane.
    pub fn xy_distance(&self, other: &Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Projects a tristimulus onto the unit plane; a zero sum is an error, never NaN.
pub fn xyz_to_chromaticity<T: Scalar>(t: Tristimulus<T>) -> Result<Chromaticity<T>> {
    t.validate()?;
    let sum = t.sum();
    if sum <= T::zero() {
        return Err(Error::ZeroTristimulus);
    }
    let x = t.x / sum;
    let y = t.y / sum;
    // z from the complement keeps the components summing to one.
    let z = (T::one() - x - y).max(T::zero());
    Ok(Chromaticity { x, y, z })
}

/// Euclidean distance between two chromaticities over all three coordinates.
pub fn delta_e_xyz<T: Scalar>(a: &Chromaticity<T>, b: &Chromaticity<T>) -> T {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let dz = a.z - b.z;
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// TV-side relative luminance (white = 1) to the colorimetric 0-100 scale.
pub fn luminance_to_percent<T: Scalar>(relative: T) -> T {
    relative * T::lit(100.0)
}

/// Colorimetric 0-100 luminance to the TV-side unit scale.
pub fn percent_to_luminance<T: Scalar>(percent: T) -> T {
    percent / T::lit(100.0)
}
