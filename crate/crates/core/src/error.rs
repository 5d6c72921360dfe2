use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("spectral distribution is empty")]
    EmptySpectrum,

    #[error("invalid wavelength grid: {0}")]
    InvalidGrid(String),

    #[error("spectral grids differ: {0}")]
    GridMismatch(String),

    #[error("invalid spectral value {value} at {wavelength} nm")]
    InvalidSample { wavelength: f64, value: f64 },

    #[error("tristimulus components sum to zero; chromaticity undefined")]
    ZeroTristimulus,

    #[error("invalid tristimulus ({x}, {y}, {z}): components must be finite and non-negative")]
    InvalidTristimulus { x: f64, y: f64, z: f64 },

    #[error("invalid chromaticity ({x}, {y}, {z})")]
    InvalidChromaticity { x: f64, y: f64, z: f64 },

    #[error("RGB weights must be non-negative and not all zero, got {0:?}")]
    InvalidWeights([f64; 3]),

    #[error("chromaticity coincides with the white point")]
    CoincidentWithWhite,

    #[error("cut wavelengths out of order: lambda1 = {lambda1} nm > lambda2 = {lambda2} nm")]
    CutOrder { lambda1: f64, lambda2: f64 },

    #[error("invalid optimal-color parameters: {0}")]
    InvalidParams(String),

    #[error("target ({x}, {y}) cannot be produced by any non-negative spectrum")]
    UnreachableTarget { x: f64, y: f64 },

    #[error("spectrum has zero luminance")]
    ZeroLuminance,

    #[error("invalid viewing conditions: {0}")]
    InvalidViewingConditions(String),

    #[error("appearance outside the invertible range of the model: {0}")]
    NotInvertible(String),

    #[error("degenerate primaries: {0}")]
    DegenerateGamut(String),

    #[error("database not found: {0}")]
    DatabaseNotFound(PathBuf),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("duplicate record id '{0}'")]
    DuplicateId(String),

    #[error("database is empty")]
    EmptyDatabase,

    #[error("color list is empty")]
    EmptyColorList,

    #[error("layout of {rows}x{cols} cannot hold {colors} colors")]
    LayoutTooSmall {
        rows: usize,
        cols: usize,
        colors: usize,
    },

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("linear RGB for patch '{name}' outside [0, 1]: {rgb:?}")]
    RgbOutOfRange { name: String, rgb: [f64; 3] },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Png(#[from] png::EncodingError),

    #[error(transparent)]
    PngDecode(#[from] png::DecodingError),
}
