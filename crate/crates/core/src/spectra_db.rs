//! Reflectance databases and nearest-chromaticity matching against target
//! colours.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::colorimetry::{delta_e_xyz, Chromaticity};
use crate::error::{Error, Result};
use crate::observer::Colorimeter;
use crate::optimal::saturation_mix;
use crate::rgb::{DisplayGamut, TargetColor};
use crate::scalar::Scalar;
use crate::spectrum::{SpectralDistribution, SpectralSamples, WORKING_GRID};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    /// `id,wavelength_nm,value`, one sample per row.
    LongCsv,
    /// `id,<nm>,<nm>,...`, one record per row.
    #[default]
    WideCsv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "long" | "long_csv" | "long-csv" => Ok(Self::LongCsv),
            "wide" | "wide_csv" | "wide-csv" => Ok(Self::WideCsv),
            other => Err(format!(
                "unknown database format '{other}' (expected long or wide)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectraRecord<T> {
    pub id: String,
    /// Reflectance on the working grid.
    pub spectrum: SpectralDistribution<T>,
    /// Chromaticity under the colorimeter the database was loaded with.
    pub cached_xy: Chromaticity<T>,
}

impl<T: Scalar> SpectraRecord<T> {
    pub fn new(
        id: impl Into<String>,
        spectrum: SpectralDistribution<T>,
        colorimeter: &Colorimeter<T>,
    ) -> Result<Self> {
        let spectrum = spectrum.resample(WORKING_GRID)?;
        let cached_xy = colorimeter.chromaticity(&spectrum)?;
        Ok(Self {
            id: id.into(),
            spectrum,
            cached_xy,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchResult<T> {
    #[serde(rename = "target")]
    pub target_name: String,
    #[serde(rename = "color_id")]
    pub record_id: String,
    pub x_spectral: T,
    pub y_spectral: T,
    pub delta_e: T,
}

struct ParseCtx<'a> {
    path: &'a str,
}

impl ParseCtx<'_> {
    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_string(),
            line,
            message: message.into(),
        }
    }

    fn number(&self, line: usize, field: &str, what: &str) -> Result<f64> {
        field
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.err(line, format!("bad {what} '{field}'")))
    }

    fn record<T: Scalar>(
        &self,
        line: usize,
        id: String,
        wavelengths: Vec<f64>,
        values: Vec<f64>,
        colorimeter: &Colorimeter<T>,
    ) -> Result<SpectraRecord<T>> {
        let wrap = |e: Error| self.err(line, format!("record '{id}': {e}"));
        let samples = SpectralSamples::new(wavelengths, values.into_iter().map(T::lit).collect())
            .map_err(wrap)?;
        let spectrum = samples.resample(WORKING_GRID).map_err(wrap)?;
        let cached_xy = colorimeter.chromaticity(&spectrum).map_err(wrap)?;
        Ok(SpectraRecord {
            id,
            spectrum,
            cached_xy,
        })
    }
}

fn line_of(row: &csv::StringRecord) -> usize {
    row.position().map_or(0, |p| p.line() as usize)
}

fn csv_error(ctx: &ParseCtx<'_>, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    ctx.err(line, e.to_string())
}

fn parse_wide<T: Scalar, R: Read>(
    ctx: &ParseCtx<'_>,
    input: R,
    colorimeter: &Colorimeter<T>,
) -> Result<Vec<SpectraRecord<T>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = rdr.headers().map_err(|e| csv_error(ctx, e))?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::EmptyDatabase);
    }
    if &headers[0] != "id" || headers.len() < 2 {
        return Err(ctx.err(1, "expected header 'id,<wavelength>,<wavelength>,...'"));
    }
    let wavelengths = headers
        .iter()
        .skip(1)
        .map(|h| ctx.number(1, h, "wavelength"))
        .collect::<Result<Vec<_>>>()?;

    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| csv_error(ctx, e))?;
        let line = line_of(&row);
        if row.len() != headers.len() {
            return Err(ctx.err(
                line,
                format!("expected {} fields, found {}", headers.len(), row.len()),
            ));
        }
        let id = row[0].to_string();
        if id.is_empty() {
            return Err(ctx.err(line, "empty id"));
        }
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateId(id));
        }
        let values = row
            .iter()
            .skip(1)
            .map(|v| ctx.number(line, v, "reflectance"))
            .collect::<Result<Vec<_>>>()?;
        if let Some(v) = values.iter().find(|v| **v < 0.0) {
            return Err(ctx.err(line, format!("record '{id}': negative reflectance {v}")));
        }
        records.push(ctx.record(line, id, wavelengths.clone(), values, colorimeter)?);
    }
    Ok(records)
}

fn parse_long<T: Scalar, R: Read>(
    ctx: &ParseCtx<'_>,
    input: R,
    colorimeter: &Colorimeter<T>,
) -> Result<Vec<SpectraRecord<T>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = rdr.headers().map_err(|e| csv_error(ctx, e))?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::EmptyDatabase);
    }
    if headers.iter().collect::<Vec<_>>() != ["id", "wavelength_nm", "value"] {
        return Err(ctx.err(1, "expected header 'id,wavelength_nm,value'"));
    }

    // (id, first line, wavelengths, values); rows of one record are contiguous
    let mut current: Option<(String, usize, Vec<f64>, Vec<f64>)> = None;
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| csv_error(ctx, e))?;
        let line = line_of(&row);
        if row.len() != 3 {
            return Err(ctx.err(line, format!("expected 3 fields, found {}", row.len())));
        }
        let id = &row[0];
        if id.is_empty() {
            return Err(ctx.err(line, "empty id"));
        }
        let w = ctx.number(line, &row[1], "wavelength")?;
        let v = ctx.number(line, &row[2], "reflectance")?;
        if v < 0.0 {
            return Err(ctx.err(line, format!("record '{id}': negative reflectance {v}")));
        }
        match &mut current {
            Some((cid, _, ws, vs)) if cid == id => {
                ws.push(w);
                vs.push(v);
            }
            _ => {
                if !seen.insert(id.to_string()) {
                    return Err(Error::DuplicateId(id.to_string()));
                }
                if let Some((cid, first, ws, vs)) = current.take() {
                    records.push(ctx.record(first, cid, ws, vs, colorimeter)?);
                }
                current = Some((id.to_string(), line, vec![w], vec![v]));
            }
        }
    }
    if let Some((cid, first, ws, vs)) = current {
        records.push(ctx.record(first, cid, ws, vs, colorimeter)?);
    }
    Ok(records)
}

/// Parses a database from any reader; `label` names the source in errors.
pub fn parse_database<T: Scalar, R: Read>(
    input: R,
    label: &str,
    format: Format,
    colorimeter: &Colorimeter<T>,
) -> Result<Vec<SpectraRecord<T>>> {
    let ctx = ParseCtx { path: label };
    let records = match format {
        Format::WideCsv => parse_wide(&ctx, input, colorimeter)?,
        Format::LongCsv => parse_long(&ctx, input, colorimeter)?,
    };
    if records.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    Ok(records)
}

pub fn load_database<T: Scalar>(
    path: &Path,
    format: Format,
    colorimeter: &Colorimeter<T>,
) -> Result<Vec<SpectraRecord<T>>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::DatabaseNotFound(path.to_path_buf()))
        }
        Err(e) => return Err(e.into()),
    };
    parse_database(
        BufReader::new(file),
        &path.display().to_string(),
        format,
        colorimeter,
    )
}

/// Writes records in the wide format on the working grid.
pub fn write_wide_csv<T: Scalar, W: Write>(records: &[SpectraRecord<T>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["id".to_string()];
    header.extend(WORKING_GRID.wavelengths().map(|nm| nm.to_string()));
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![r.id.clone()];
        row.extend(r.spectrum.values().iter().map(|v| v.as_f64().to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Closest record to each target by xyz distance; exact ties go to the
/// lexicographically smallest id. Results follow the target order.
pub fn match_nearest<T: Scalar>(
    targets: &[TargetColor<T>],
    db: &[SpectraRecord<T>],
) -> Result<Vec<MatchResult<T>>> {
    if db.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    Ok(targets
        .par_iter()
        .map(|target| {
            let mut best = &db[0];
            let mut best_de = delta_e_xyz(&target.chromaticity, &best.cached_xy);
            for rec in &db[1..] {
                let de = delta_e_xyz(&target.chromaticity, &rec.cached_xy);
                if de < best_de || (de == best_de && rec.id < best.id) {
                    best = rec;
                    best_de = de;
                }
            }
            MatchResult {
                target_name: target.name.clone(),
                record_id: best.id.clone(),
                x_spectral: best.cached_xy.x,
                y_spectral: best.cached_xy.y,
                delta_e: best_de,
            }
        })
        .collect())
}

pub const MATCH_CSV_HEADER: [&str; 5] =
    ["target", "x_spectral", "y_spectral", "color_id", "delta_e"];

pub fn write_match_csv<T: Scalar, W: Write>(results: &[MatchResult<T>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(MATCH_CSV_HEADER)?;
    for r in results {
        w.write_record([
            r.target_name.clone(),
            format!("{}", r.x_spectral.as_f64()),
            format!("{}", r.y_spectral.as_f64()),
            r.record_id.clone(),
            format!("{}", r.delta_e.as_f64()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Sixteen test colours: primaries and secondaries at full and 0.9
/// saturation, primaries at 0.5 saturation, and white.
pub fn build_target_set<T: Scalar>(gamut: &DisplayGamut<T>) -> Vec<TargetColor<T>> {
    let hues: [(&str, [f64; 3]); 6] = [
        ("R", [1.0, 0.0, 0.0]),
        ("G", [0.0, 1.0, 0.0]),
        ("B", [0.0, 0.0, 1.0]),
        ("C", [0.0, 0.5, 0.5]),
        ("M", [0.5, 0.0, 0.5]),
        ("Ye", [0.5, 0.5, 0.0]),
    ];
    let mut set: Vec<(String, [f64; 3])> = hues.iter().map(|(n, w)| (n.to_string(), *w)).collect();
    set.extend(
        hues.iter()
            .map(|(n, w)| (format!("{n}0.9"), saturation_mix(*w, 0.9))),
    );
    set.extend(
        hues[..3]
            .iter()
            .map(|(n, w)| (format!("{n}0.5"), saturation_mix(*w, 0.5))),
    );
    set.push(("W".into(), [1.0, 1.0, 1.0]));
    set.into_iter()
        .map(|(name, w)| {
            gamut
                .target(name, w.map(T::lit))
                .expect("fixed non-negative weights")
        })
        .collect()
}
