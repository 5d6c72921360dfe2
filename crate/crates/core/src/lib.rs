//! Colorimetric test material for video paths.
//!
//! The numeric core is generic over the scalar type (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`, which is what the command-line
//! tool and most callers want.

pub mod atlas;
pub mod cam16;
pub mod chart;
pub mod colorimetry;
pub mod dominant;
pub mod error;
pub mod observer;
pub mod optimal;
pub mod rgb;
pub mod scalar;
pub mod simplex;
pub mod spectra_db;
pub mod spectrum;

pub use cam16::{Chromatic, Surround};
pub use chart::{render_chart, ChartColor, ChartLayout, ChartMetadata, PatchSource, Transfer};
pub use error::{Error, Result};
pub use observer::Observer;
pub use optimal::{Genus, GenusChoice};
pub use scalar::Scalar;
pub use spectra_db::Format;
pub use spectrum::{Grid, LAMBDA_MAX, LAMBDA_MIN, WORKING_GRID};

pub type Spectrum = spectrum::SpectralDistribution<f64>;
pub type Samples = spectrum::SpectralSamples<f64>;
pub type Tristimulus = colorimetry::Tristimulus<f64>;
pub type Chromaticity = colorimetry::Chromaticity<f64>;
pub type Illuminant = observer::Illuminant<f64>;
pub type Colorimeter = observer::Colorimeter<f64>;
pub type DisplayGamut = rgb::DisplayGamut<f64>;
pub type TargetColor = rgb::TargetColor<f64>;
pub type DominantWavelength = dominant::DominantWavelength<f64>;
pub type OptimalSpectrumParams = optimal::OptimalSpectrumParams<f64>;
pub type SolveOptions = optimal::SolveOptions<f64>;
pub type SolveReport = optimal::SolveReport<f64>;
pub type ViewingConditions = cam16::ViewingConditions<f64>;
pub type Appearance = cam16::Appearance<f64>;
pub type UcsPoint = cam16::UcsPoint<f64>;
pub type AtlasSpec = atlas::AtlasSpec<f64>;
pub type AtlasPoint = atlas::AtlasPoint<f64>;
pub type Atlas = atlas::Atlas<f64>;
pub type SpectraRecord = spectra_db::SpectraRecord<f64>;
pub type MatchResult = spectra_db::MatchResult<f64>;
