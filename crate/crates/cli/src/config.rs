//! Run configuration: built-in defaults, an optional JSON file, then flags.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use chromatest::observer::Illuminant;
use chromatest::{
    Chromaticity, Colorimeter, DisplayGamut, Observer, Samples, Surround, Tristimulus,
    ViewingConditions,
};
use serde::Deserialize;

use crate::{CliError, GlobalArgs};

/// Shape of the `--config` file. Every field is optional; flags win.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// `D65`, `A`, `E`, or a path to a `wavelength_nm,value` CSV.
    pub illuminant: Option<String>,
    pub observer: Option<Observer>,
    /// Display primaries as `[[xr, yr], [xg, yg], [xb, yb]]`.
    pub primaries: Option<[[f64; 2]; 3]>,
    pub white: Option<[f64; 2]>,
    pub la: Option<f64>,
    pub yb: Option<f64>,
    pub surround: Option<Surround>,
    /// Degree of adaptation; computed from `la` and the surround when absent.
    pub d: Option<f64>,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let file = File::open(path)
            .map_err(|e| CliError::domain(format!("config {}: {e}", path.display())))?;
        serde_json::from_reader(BufReader::new(file))
            .map_err(|e| CliError::domain(format!("config {}: {e}", path.display())))
    }
}

pub const DEFAULT_LA: f64 = 50.0;
pub const DEFAULT_YB: f64 = 20.0;

/// Fully resolved inputs shared by the subcommands.
pub struct Settings {
    pub illuminant_label: String,
    pub observer: Observer,
    pub colorimeter: Colorimeter,
    pub gamut: DisplayGamut,
    pub la: f64,
    pub yb: f64,
    pub surround: Surround,
    pub d: Option<f64>,
    pub output_dir: Option<PathBuf>,
}

impl Settings {
    pub fn resolve(flags: &GlobalArgs) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let illuminant_spec = flags
            .illuminant
            .clone()
            .or(file.illuminant)
            .unwrap_or_else(|| "D65".into());
        let observer = flags.observer.or(file.observer).unwrap_or_default();
        let (illuminant, illuminant_label) = parse_illuminant(&illuminant_spec)?;
        let colorimeter = Colorimeter::new(&illuminant, observer)
            .map_err(|e| CliError::domain(format!("illuminant {illuminant_spec}: {e}")))?;

        let primaries = flags
            .primaries
            .map(|p| [[p[0], p[1]], [p[2], p[3]], [p[4], p[5]]])
            .or(file.primaries);
        let white = flags.white.or(file.white);
        let gamut = build_gamut(primaries, white)?;

        Ok(Self {
            illuminant_label,
            observer,
            colorimeter,
            gamut,
            la: flags.la.or(file.la).unwrap_or(DEFAULT_LA),
            yb: flags.yb.or(file.yb).unwrap_or(DEFAULT_YB),
            surround: flags.surround.or(file.surround).unwrap_or_default(),
            d: flags.d.or(file.d),
            output_dir: flags.output_dir.clone().or(file.output_dir),
        })
    }

    /// Viewing conditions adapted to the display white at `Y = 100`.
    pub fn viewing_conditions(&self) -> Result<ViewingConditions, CliError> {
        let w = self.gamut.white();
        let white = Tristimulus::new(100.0 * w.x / w.y, 100.0, 100.0 * w.z / w.y)
            .map_err(|e| CliError::domain(format!("display white: {e}")))?;
        let vc = match self.d {
            Some(d) => ViewingConditions::with_degree_of_adaptation(
                white,
                self.la,
                self.yb,
                self.surround,
                d,
            ),
            None => ViewingConditions::new(white, self.la, self.yb, self.surround),
        };
        vc.map_err(|e| {
            CliError::domain(format!(
                "viewing conditions (la {}, yb {}): {e}",
                self.la, self.yb
            ))
        })
    }

    /// Relative output paths land in the configured output directory.
    pub fn output_path(&self, path: &Path) -> PathBuf {
        match &self.output_dir {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.to_path_buf(),
        }
    }
}

fn parse_illuminant(spec: &str) -> Result<(Illuminant<f64>, String), CliError> {
    match spec.to_ascii_uppercase().as_str() {
        "D65" => return Ok((Illuminant::D65, "D65".into())),
        "A" => return Ok((Illuminant::A, "A".into())),
        "E" => return Ok((Illuminant::E, "E".into())),
        _ => {}
    }
    let path = Path::new(spec);
    let file =
        File::open(path).map_err(|e| CliError::domain(format!("illuminant file {spec}: {e}")))?;
    let samples = Samples::read_csv(BufReader::new(file))
        .map_err(|e| CliError::domain(format!("illuminant file {spec}: {e}")))?;
    let spd = samples
        .resample(chromatest::WORKING_GRID)
        .map_err(|e| CliError::domain(format!("illuminant file {spec}: {e}")))?;
    Ok((Illuminant::Custom(spd), spec.to_string()))
}

fn build_gamut(
    primaries: Option<[[f64; 2]; 3]>,
    white: Option<[f64; 2]>,
) -> Result<DisplayGamut, CliError> {
    let xy = |p: [f64; 2], what: &str| {
        Chromaticity::new(p[0], p[1])
            .map_err(|e| CliError::domain(format!("{what} ({}, {}): {e}", p[0], p[1])))
    };
    let nominal = DisplayGamut::rec709();
    let white = match white {
        Some(w) => xy(w, "white")?,
        None => nominal.white(),
    };
    match primaries {
        None => Ok(DisplayGamut::rec709_with_white(white)),
        Some(p) => DisplayGamut::new(
            [
                xy(p[0], "red primary")?,
                xy(p[1], "green primary")?,
                xy(p[2], "blue primary")?,
            ],
            white,
            nominal.white_luminance(),
        )
        .map_err(|e| CliError::domain(format!("primaries: {e}"))),
    }
}
