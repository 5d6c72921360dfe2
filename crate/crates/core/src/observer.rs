//! Standard observers, illuminants and spectral integration.
//!
//! The observer colour-matching functions and the D65 power distribution are
//! embedded CSV assets at 1 nm (see `data/` for their provenance headers).

use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::colorimetry::{xyz_to_chromaticity, Chromaticity, Tristimulus};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectrum::{ensure_same_grid, SpectralDistribution, SpectralSamples, WORKING_GRID};

const CIE1931_2DEG: &str = include_str!("../data/cie1931_2deg_1nm.csv");
const CIE1964_10DEG: &str = include_str!("../data/cie1964_10deg_1nm.csv");
const D65_1NM: &str = include_str!("../data/d65_1nm.csv");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Observer {
    /// CIE 1931 2 degree.
    #[default]
    Degree2,
    /// CIE 1964 10 degree.
    Degree10,
}

impl FromStr for Observer {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "2" | "degree2" | "2deg" | "cie1931" => Ok(Self::Degree2),
            "10" | "degree10" | "10deg" | "cie1964" => Ok(Self::Degree10),
            other => Err(format!(
                "unknown observer '{other}' (expected degree2 or degree10)"
            )),
        }
    }
}

impl std::fmt::Display for Observer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Degree2 => "degree2",
            Self::Degree10 => "degree10",
        })
    }
}

/// Colour-matching functions on the working grid.
#[derive(Clone, Debug)]
pub struct ObserverTables<T> {
    pub observer: Observer,
    pub cmf_x: SpectralDistribution<T>,
    pub cmf_y: SpectralDistribution<T>,
    pub cmf_z: SpectralDistribution<T>,
}

struct RawCmfs {
    x: SpectralSamples<f64>,
    y: SpectralSamples<f64>,
    z: SpectralSamples<f64>,
}

fn parse_table(text: &str, columns: usize) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let row: Vec<f64> = l
                .split(',')
                .map(|f| f.trim().parse().expect("embedded table is numeric"))
                .collect();
            assert_eq!(row.len(), columns, "embedded table row width");
            row
        })
        .collect()
}

fn raw_cmfs(observer: Observer) -> &'static RawCmfs {
    static DEG2: OnceLock<RawCmfs> = OnceLock::new();
    static DEG10: OnceLock<RawCmfs> = OnceLock::new();
    let (cell, text) = match observer {
        Observer::Degree2 => (&DEG2, CIE1931_2DEG),
        Observer::Degree10 => (&DEG10, CIE1964_10DEG),
    };
    cell.get_or_init(|| {
        let rows = parse_table(text, 4);
        let wl: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let col = |i: usize| {
            SpectralSamples::new(wl.clone(), rows.iter().map(|r| r[i]).collect())
                .expect("embedded CMF table is valid")
        };
        RawCmfs {
            x: col(1),
            y: col(2),
            z: col(3),
        }
    })
}

fn raw_d65() -> &'static SpectralSamples<f64> {
    static D65: OnceLock<SpectralSamples<f64>> = OnceLock::new();
    D65.get_or_init(|| {
        let rows = parse_table(D65_1NM, 2);
        SpectralSamples::new(
            rows.iter().map(|r| r[0]).collect(),
            rows.iter().map(|r| r[1]).collect(),
        )
        .expect("embedded D65 table is valid")
    })
}

fn convert<T: Scalar>(spd: SpectralDistribution<f64>) -> SpectralDistribution<T> {
    let values = spd.values().iter().map(|&v| T::lit(v)).collect();
    SpectralDistribution::from_parts_unchecked(spd.grid(), values)
}

impl<T: Scalar> ObserverTables<T> {
    pub fn load(observer: Observer) -> Self {
        let raw = raw_cmfs(observer);
        let on_grid = |s: &SpectralSamples<f64>| {
            convert(s.resample(WORKING_GRID).expect("working grid is valid"))
        };
        Self {
            observer,
            cmf_x: on_grid(&raw.x),
            cmf_y: on_grid(&raw.y),
            cmf_z: on_grid(&raw.z),
        }
    }

    /// Chromaticity of each monochromatic stimulus on the working grid.
    pub fn spectral_locus(&self) -> Vec<(u32, Chromaticity<T>)> {
        self.cmf_x
            .iter()
            .zip(self.cmf_y.values())
            .zip(self.cmf_z.values())
            .filter_map(|(((w, x), &y), &z)| {
                xyz_to_chromaticity(Tristimulus { x, y, z })
                    .ok()
                    .map(|c| (w, c))
            })
            .collect()
    }

    /// Wavelength of the `cmf_y` maximum.
    pub fn peak_y_nm(&self) -> u32 {
        self.cmf_y
            .iter()
            .fold((0, T::neg_infinity()), |best, (w, v)| {
                if v > best.1 {
                    (w, v)
                } else {
                    best
                }
            })
            .0
    }
}

/// Illuminant power distribution P(lambda).
#[derive(Clone, Debug, PartialEq)]
pub enum Illuminant<T> {
    D65,
    /// CIE illuminant A (Planckian, 2856 K), from its defining formula.
    A,
    /// Equal-energy illuminant E.
    E,
    Custom(SpectralDistribution<T>),
}

impl<T: Scalar> Illuminant<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Self::D65 => "D65",
            Self::A => "A",
            Self::E => "E",
            Self::Custom(_) => "custom",
        }
    }

    /// Power distribution on the working grid.
    pub fn spd(&self) -> Result<SpectralDistribution<T>> {
        match self {
            Self::D65 => Ok(convert(raw_d65().resample(WORKING_GRID)?)),
            Self::A => SpectralDistribution::from_fn(WORKING_GRID, |w| {
                let c2 = 1.435e7_f64;
                let lambda = f64::from(w);
                let v = 100.0 * (560.0 / lambda).powi(5) * ((c2 / (2848.0 * 560.0)).exp() - 1.0)
                    / ((c2 / (2848.0 * lambda)).exp() - 1.0);
                T::lit(v)
            }),
            Self::E => SpectralDistribution::constant(WORKING_GRID, T::lit(100.0)),
            Self::Custom(spd) => spd.resample(WORKING_GRID),
        }
    }
}

/// Binds an illuminant and an observer; integrates reflectances to XYZ.
///
/// The normalization constant makes the perfect reflector produce `Y = 100`.
#[derive(Clone, Debug)]
pub struct Colorimeter<T> {
    illuminant_name: &'static str,
    observer: Observer,
    illuminant: SpectralDistribution<T>,
    tables: ObserverTables<T>,
    /// P(lambda) * cmf(lambda) * k, per channel.
    weights: [Vec<T>; 3],
}

impl<T: Scalar> Colorimeter<T> {
    pub fn new(illuminant: &Illuminant<T>, observer: Observer) -> Result<Self> {
        Self::from_parts(
            illuminant.name(),
            illuminant.spd()?,
            ObserverTables::load(observer),
        )
    }

    /// D65 and the 2 degree observer.
    pub fn standard() -> Self {
        Self::new(&Illuminant::D65, Observer::Degree2).expect("embedded tables are valid")
    }

    pub fn from_parts(
        illuminant_name: &'static str,
        illuminant: SpectralDistribution<T>,
        tables: ObserverTables<T>,
    ) -> Result<Self> {
        ensure_same_grid(illuminant.grid(), tables.cmf_y.grid())?;
        let raw = |cmf: &SpectralDistribution<T>| -> Vec<T> {
            illuminant
                .values()
                .iter()
                .zip(cmf.values())
                .map(|(&p, &c)| p * c)
                .collect()
        };
        let (wx, wy, wz) = (raw(&tables.cmf_x), raw(&tables.cmf_y), raw(&tables.cmf_z));
        let y_white: T = wy.iter().copied().sum();
        if y_white <= T::zero() {
            return Err(Error::ZeroLuminance);
        }
        let k = T::lit(100.0) / y_white;
        let norm = |w: Vec<T>| w.into_iter().map(|v| v * k).collect::<Vec<_>>();
        Ok(Self {
            illuminant_name,
            observer: tables.observer,
            weights: [norm(wx), norm(wy), norm(wz)],
            illuminant,
            tables,
        })
    }

    pub fn illuminant_name(&self) -> &'static str {
        self.illuminant_name
    }

    pub fn observer(&self) -> Observer {
        self.observer
    }

    pub fn illuminant(&self) -> &SpectralDistribution<T> {
        &self.illuminant
    }

    pub fn tables(&self) -> &ObserverTables<T> {
        &self.tables
    }

    /// Integrated channel weights (k * P * cmf) on the working grid.
    pub fn weights(&self) -> &[Vec<T>; 3] {
        &self.weights
    }

    /// X, Y, Z of a reflectance on the working grid.
    pub fn spd_to_xyz(&self, reflectance: &SpectralDistribution<T>) -> Result<Tristimulus<T>> {
        ensure_same_grid(reflectance.grid(), self.illuminant.grid())?;
        Ok(self.integrate(reflectance.values()))
    }

    /// Integration over raw samples; `values.len()` must match the working grid.
    pub(crate) fn integrate(&self, values: &[T]) -> Tristimulus<T> {
        let dot = |w: &[T]| values.iter().zip(w).map(|(&s, &w)| s * w).sum::<T>();
        Tristimulus {
            x: dot(&self.weights[0]),
            y: dot(&self.weights[1]),
            z: dot(&self.weights[2]),
        }
    }

    /// Tristimulus of the perfect reflector (Y = 100).
    pub fn white(&self) -> Tristimulus<T> {
        let sum = |w: &[T]| w.iter().copied().sum::<T>();
        Tristimulus {
            x: sum(&self.weights[0]),
            y: T::lit(100.0),
            z: sum(&self.weights[2]),
        }
    }

    pub fn white_chromaticity(&self) -> Chromaticity<T> {
        xyz_to_chromaticity(self.white()).expect("white has positive luminance")
    }

    /// Chromaticity of a reflectance.
    pub fn chromaticity(&self, reflectance: &SpectralDistribution<T>) -> Result<Chromaticity<T>> {
        xyz_to_chromaticity(self.spd_to_xyz(reflectance)?)
    }
}

/// One-shot integration with an explicit illuminant and observer.
pub fn spd_to_xyz<T: Scalar>(
    reflectance: &SpectralDistribution<T>,
    illuminant: &SpectralDistribution<T>,
    observer: &ObserverTables<T>,
) -> Result<Tristimulus<T>> {
    let c = Colorimeter::from_parts("custom", illuminant.clone(), observer.clone())?;
    c.spd_to_xyz(reflectance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::Grid;

    #[test]
    fn tables_share_working_grid_and_peak() {
        for obs in [Observer::Degree2, Observer::Degree10] {
            let t = ObserverTables::<f64>::load(obs);
            assert_eq!(t.cmf_x.grid(), WORKING_GRID);
            assert_eq!(t.cmf_y.grid(), WORKING_GRID);
            assert_eq!(t.cmf_z.grid(), WORKING_GRID);
            let peak = t.peak_y_nm();
            assert!((550..=560).contains(&peak), "{obs:?} peak {peak}");
        }
    }

    #[test]
    fn d65_perfect_reflector_is_d65_white() {
        let c = Colorimeter::<f64>::standard();
        let flat = SpectralDistribution::constant(WORKING_GRID, 1.0).unwrap();
        let xyz = c.spd_to_xyz(&flat).unwrap();
        assert!((xyz.y - 100.0).abs() < 1e-10);
        let xy = c.chromaticity(&flat).unwrap();
        assert!((xy.x - 0.3127).abs() < 5e-4, "{xy:?}");
        assert!((xy.y - 0.3290).abs() < 5e-4, "{xy:?}");
        assert!((xy.z - 0.3583).abs() < 5e-4, "{xy:?}");
    }

    #[test]
    fn zero_spectrum_gives_zero() {
        let c = Colorimeter::<f64>::standard();
        let zero = SpectralDistribution::constant(WORKING_GRID, 0.0).unwrap();
        assert_eq!(c.spd_to_xyz(&zero).unwrap(), Tristimulus::zero());
    }

    #[test]
    fn perfect_reflector_is_100_for_every_illuminant() {
        for ill in [Illuminant::D65, Illuminant::A, Illuminant::E] {
            for obs in [Observer::Degree2, Observer::Degree10] {
                let c = Colorimeter::<f64>::new(&ill, obs).unwrap();
                let flat = SpectralDistribution::constant(WORKING_GRID, 1.0).unwrap();
                let y = c.spd_to_xyz(&flat).unwrap().y;
                assert!((y - 100.0).abs() < 1e-10, "{} {obs:?}: {y}", ill.name());
            }
        }
    }

    #[test]
    fn illuminant_a_white_point() {
        let c = Colorimeter::<f64>::new(&Illuminant::A, Observer::Degree2).unwrap();
        let w = c.white_chromaticity();
        // Published A white (0.44757, 0.40745); truncation at 720 nm shifts it slightly.
        assert!((w.x - 0.4476).abs() < 3e-3, "{w:?}");
        assert!((w.y - 0.4074).abs() < 3e-3, "{w:?}");
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let c = Colorimeter::<f64>::standard();
        let coarse = SpectralDistribution::constant(Grid::new(360, 5, 73).unwrap(), 1.0).unwrap();
        assert!(matches!(c.spd_to_xyz(&coarse), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn free_function_matches_colorimeter() {
        let c = Colorimeter::<f64>::standard();
        let s =
            SpectralDistribution::from_fn(WORKING_GRID, |w| f64::from(w - 360) / 360.0).unwrap();
        let a = c.spd_to_xyz(&s).unwrap();
        let b = spd_to_xyz(&s, c.illuminant(), c.tables()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_precision_integration() {
        let c = Colorimeter::<f32>::standard();
        let flat = SpectralDistribution::constant(WORKING_GRID, 1.0f32).unwrap();
        let xy = c.chromaticity(&flat).unwrap();
        assert!((xy.x - 0.3127).abs() < 5e-4);
        assert!((xy.y - 0.3290).abs() < 5e-4);
    }

    #[test]
    fn observer_parses() {
        assert_eq!("degree10".parse::<Observer>().unwrap(), Observer::Degree10);
        assert_eq!("2".parse::<Observer>().unwrap(), Observer::Degree2);
        assert!("15".parse::<Observer>().is_err());
    }
}
