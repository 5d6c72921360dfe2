//! Sampled spectral functions and the wavelength grids they live on.
//!
//! Every colorimetric computation in this crate runs on a common regular grid,
//! [`WORKING_GRID`] (360 to 720 nm in 1 nm steps). Measured data arrives on
//! arbitrary grids and is brought onto the working grid with
//! [`SpectralSamples::resample`]: piecewise-linear inside the measured support,
//! zero outside it.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Shortest wavelength of the working range, in nm.
pub const LAMBDA_MIN: u32 = 360;
/// Longest wavelength of the working range, in nm.
pub const LAMBDA_MAX: u32 = 720;

/// Regular wavelength grid: `start, start + step, ..., start + step * (count - 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grid {
    pub start_nm: u32,
    pub step_nm: u32,
    pub count: usize,
}

/// 360 to 720 nm at 1 nm.
pub const WORKING_GRID: Grid = Grid {
    start_nm: LAMBDA_MIN,
    step_nm: 1,
    count: (LAMBDA_MAX - LAMBDA_MIN + 1) as usize,
};

impl Grid {
    pub fn new(start_nm: u32, step_nm: u32, count: usize) -> Result<Self> {
        if step_nm == 0 {
            return Err(Error::InvalidGrid("step must be positive".into()));
        }
        if count == 0 {
            return Err(Error::InvalidGrid("grid has no samples".into()));
        }
        Ok(Self {
            start_nm,
            step_nm,
            count,
        })
    }

    pub fn end_nm(&self) -> u32 {
        self.start_nm + self.step_nm * (self.count as u32 - 1)
    }

    pub fn wavelength(&self, index: usize) -> u32 {
        self.start_nm + self.step_nm * index as u32
    }

    pub fn wavelengths(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.count).map(|i| self.wavelength(i))
    }

    /// Index of an exact grid wavelength.
    pub fn index_of(&self, wavelength_nm: u32) -> Option<usize> {
        if wavelength_nm < self.start_nm || wavelength_nm > self.end_nm() {
            return None;
        }
        let offset = wavelength_nm - self.start_nm;
        offset
            .is_multiple_of(self.step_nm)
            .then(|| (offset / self.step_nm) as usize)
    }

    fn within_working_range(&self) -> bool {
        self.start_nm >= LAMBDA_MIN && self.end_nm() <= LAMBDA_MAX
    }
}

/// Non-negative function sampled on a regular [`Grid`].
///
/// Holds reflectances as well as illuminant power weights.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDistribution<T> {
    grid: Grid,
    values: Vec<T>,
}

impl<T: Scalar> SpectralDistribution<T> {
    pub fn new(start_nm: u32, step_nm: u32, values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        let grid = Grid::new(start_nm, step_nm, values.len())?;
        for (w, v) in grid.wavelengths().zip(&values) {
            check_sample(f64::from(w), *v)?;
        }
        Ok(Self { grid, values })
    }

    /// Constant function on `grid`.
    pub fn constant(grid: Grid, value: T) -> Result<Self> {
        check_sample(f64::from(grid.start_nm), value)?;
        Ok(Self {
            grid,
            values: vec![value; grid.count],
        })
    }

    /// Samples `f` at every grid wavelength.
    pub fn from_fn(grid: Grid, mut f: impl FnMut(u32) -> T) -> Result<Self> {
        let values = grid.wavelengths().map(&mut f).collect::<Vec<_>>();
        Self::new(grid.start_nm, grid.step_nm, values)
    }

    pub(crate) fn from_parts_unchecked(grid: Grid, values: Vec<T>) -> Self {
        debug_assert_eq!(grid.count, values.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn start_nm(&self) -> u32 {
        self.grid.start_nm
    }

    pub fn step_nm(&self) -> u32 {
        self.grid.step_nm
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at an exact grid wavelength.
    pub fn at(&self, wavelength_nm: u32) -> Option<T> {
        self.grid.index_of(wavelength_nm).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, T)> + '_ {
        self.grid.wavelengths().zip(self.values.iter().copied())
    }

    /// Multiplies every sample by `alpha >= 0`.
    pub fn scaled(&self, alpha: T) -> Result<Self> {
        let values = self.values.iter().map(|&v| v * alpha).collect();
        Self::new(self.grid.start_nm, self.grid.step_nm, values)
    }

    /// Pointwise sum of two distributions on the same grid.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        ensure_same_grid(self.grid, other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(Self::from_parts_unchecked(self.grid, values))
    }

    /// Resamples onto `grid`, which must lie within 360 to 720 nm.
    pub fn resample(&self, grid: Grid) -> Result<Self> {
        self.to_samples().resample(grid)
    }

    pub fn to_samples(&self) -> SpectralSamples<T> {
        SpectralSamples {
            wavelengths: self.grid.wavelengths().map(f64::from).collect(),
            values: self.values.clone(),
        }
    }
}

pub(crate) fn ensure_same_grid(a: Grid, b: Grid) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch(format!(
            "{}..{} step {} vs {}..{} step {}",
            a.start_nm,
            a.end_nm(),
            a.step_nm,
            b.start_nm,
            b.end_nm(),
            b.step_nm
        )));
    }
    Ok(())
}

fn check_sample<T: Scalar>(wavelength: f64, value: T) -> Result<()> {
    if !value.is_finite() || value < T::zero() {
        return Err(Error::InvalidSample {
            wavelength,
            value: value.as_f64(),
        });
    }
    Ok(())
}

/// Spectral samples at strictly increasing, not necessarily regular, wavelengths.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSamples<T> {
    wavelengths: Vec<f64>,
    values: Vec<T>,
}

impl<T: Scalar> SpectralSamples<T> {
    pub fn new(wavelengths: Vec<f64>, values: Vec<T>) -> Result<Self> {
        if wavelengths.is_empty() || values.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        if wavelengths.len() != values.len() {
            return Err(Error::InvalidGrid(format!(
                "{} wavelengths but {} values",
                wavelengths.len(),
                values.len()
            )));
        }
        if let Some(pair) = wavelengths.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid(format!(
                "wavelengths not strictly increasing at {} -> {}",
                pair[0], pair[1]
            )));
        }
        if let Some(w) = wavelengths.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite wavelength {w}")));
        }
        for (&w, &v) in wavelengths.iter().zip(&values) {
            check_sample(w, v)?;
        }
        Ok(Self {
            wavelengths,
            values,
        })
    }

    pub fn wavelengths(&self) -> &[f64] {
        &self.wavelengths
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Linear interpolation inside the sampled support, zero outside it.
    pub fn value_at(&self, wavelength: f64) -> T {
        let wl = &self.wavelengths;
        let last = wl.len() - 1;
        if wavelength < wl[0] || wavelength > wl[last] {
            return T::zero();
        }
        if last == 0 {
            return self.values[0];
        }
        // first index with wl[i] >= wavelength
        let hi = wl.partition_point(|&w| w < wavelength);
        if wl[hi] == wavelength {
            return self.values[hi];
        }
        let lo = hi - 1;
        let t = T::lit((wavelength - wl[lo]) / (wl[hi] - wl[lo]));
        self.values[lo] + (self.values[hi] - self.values[lo]) * t
    }

    /// Resamples onto `grid`, which must lie within 360 to 720 nm.
    pub fn resample(&self, grid: Grid) -> Result<SpectralDistribution<T>> {
        if grid.step_nm == 0 || grid.count == 0 {
            return Err(Error::InvalidGrid("empty or zero-step target grid".into()));
        }
        if !grid.within_working_range() {
            return Err(Error::InvalidGrid(format!(
                "target grid {}..{} nm outside {LAMBDA_MIN}..{LAMBDA_MAX} nm",
                grid.start_nm,
                grid.end_nm()
            )));
        }
        let values = grid
            .wavelengths()
            .map(|w| self.value_at(f64::from(w)))
            .collect();
        Ok(SpectralDistribution::from_parts_unchecked(grid, values))
    }

    /// Parses the `wavelength_nm,value` CSV format.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "wavelength_nm" || &headers[1] != "value" {
            return Err(parse_err(1, "expected header 'wavelength_nm,value'"));
        }
        let mut wavelengths = Vec::new();
        let mut values = Vec::new();
        for (i, row) in rdr.records().enumerate() {
            let line = i + 2;
            let row = row?;
            if row.len() != 2 {
                return Err(parse_err(line, "expected two columns"));
            }
            let w: f64 = row[0]
                .parse()
                .map_err(|_| parse_err(line, &format!("bad wavelength '{}'", &row[0])))?;
            let v: f64 = row[1]
                .parse()
                .map_err(|_| parse_err(line, &format!("bad value '{}'", &row[1])))?;
            if let Some(&prev) = wavelengths.last() {
                if w <= prev {
                    return Err(parse_err(line, "wavelengths must be strictly increasing"));
                }
            }
            if !v.is_finite() || v < 0.0 {
                return Err(parse_err(
                    line,
                    &format!("negative or non-finite value {v}"),
                ));
            }
            wavelengths.push(w);
            values.push(T::lit(v));
        }
        Self::new(wavelengths, values)
    }

    /// Writes the `wavelength_nm,value` CSV format.
    pub fn write_csv<W: Write>(&self, mut writer: W) -> Result<()> {
        writeln!(writer, "wavelength_nm,value")?;
        for (w, v) in self.wavelengths.iter().zip(&self.values) {
            writeln!(writer, "{w},{v}")?;
        }
        Ok(())
    }
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse {
        path: "<spectrum>".into(),
        line,
        message: message.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_spectrum_resamples_to_flat() {
        let spd = SpectralDistribution::constant(Grid::new(360, 5, 73).unwrap(), 1.0).unwrap();
        let fine = spd.resample(WORKING_GRID).unwrap();
        assert_eq!(fine.len(), 361);
        assert!(fine.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn outside_support_is_zero() {
        let spd = SpectralDistribution::constant(Grid::new(400, 10, 31).unwrap(), 0.7).unwrap();
        let fine = spd.resample(WORKING_GRID).unwrap();
        assert_eq!(fine.at(360), Some(0.0));
        assert_eq!(fine.at(399), Some(0.0));
        assert_eq!(fine.at(400), Some(0.7));
        assert_eq!(fine.at(700), Some(0.7));
        assert_eq!(fine.at(701), Some(0.0));
    }

    #[test]
    fn linear_midpoint() {
        let s = SpectralSamples::new(vec![500.0, 510.0], vec![0.0, 1.0]).unwrap();
        let fine = s.resample(WORKING_GRID).unwrap();
        assert_eq!(fine.at(505), Some(0.5));
        assert_eq!(fine.at(500), Some(0.0));
        assert_eq!(fine.at(510), Some(1.0));
    }

    #[test]
    fn output_grid_is_exactly_requested() {
        let spd = SpectralDistribution::constant(WORKING_GRID, 0.25f32).unwrap();
        let g = Grid::new(380, 5, 65).unwrap();
        let out = spd.resample(g).unwrap();
        assert_eq!(out.grid(), g);
        assert_eq!(out.grid().end_nm(), 700);
    }

    #[test]
    fn rejects_empty_and_non_monotone() {
        assert!(matches!(
            SpectralDistribution::<f64>::new(360, 1, vec![]),
            Err(Error::EmptySpectrum)
        ));
        assert!(matches!(
            SpectralSamples::new(vec![500.0, 500.0], vec![0.0, 1.0]),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            SpectralSamples::new(vec![510.0, 500.0], vec![0.0, 1.0]),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(Grid::new(360, 0, 3), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn rejects_target_grid_outside_working_range() {
        let spd = SpectralDistribution::constant(WORKING_GRID, 1.0).unwrap();
        assert!(spd.resample(Grid::new(350, 1, 20).unwrap()).is_err());
        assert!(spd.resample(Grid::new(700, 5, 10).unwrap()).is_err());
    }

    #[test]
    fn rejects_negative_and_nan_values() {
        assert!(SpectralDistribution::new(360, 1, vec![0.1, -0.1]).is_err());
        assert!(SpectralDistribution::new(360, 1, vec![0.1, f64::NAN]).is_err());
    }

    #[test]
    fn grid_mismatch_on_add() {
        let a = SpectralDistribution::constant(WORKING_GRID, 1.0).unwrap();
        let b = SpectralDistribution::constant(Grid::new(360, 5, 73).unwrap(), 1.0).unwrap();
        assert!(matches!(a.checked_add(&b), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn csv_round_trip() {
        let s = SpectralSamples::new(vec![400.0, 500.5, 600.0], vec![0.1, 0.25, 0.9]).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert!(buf.starts_with(b"wavelength_nm,value\n"));
        let back = SpectralSamples::<f64>::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn csv_rejects_bad_header_and_order() {
        let bad_header = "nm,v\n400,1\n";
        assert!(SpectralSamples::<f64>::read_csv(bad_header.as_bytes()).is_err());
        let unordered = "wavelength_nm,value\n500,1\n400,1\n";
        match SpectralSamples::<f64>::read_csv(unordered.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
