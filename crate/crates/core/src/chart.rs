//! 16-bit test-chart images with a JSON sidecar describing every patch.

use std::io::{BufRead, Read, Seek, Write};

use serde::{Deserialize, Serialize};

use crate::cam16::Surround;
use crate::colorimetry::xyz_to_chromaticity;
use crate::error::{Error, Result};
use crate::rgb::DisplayGamut;

/// HDTV opto-electronic transfer function.
pub fn rec709_oetf(l: f64) -> f64 {
    if l < 0.018 {
        4.5 * l
    } else {
        1.099 * l.powf(0.45) - 0.099
    }
}

pub fn rec709_inverse_oetf(v: f64) -> f64 {
    if v < 0.081 {
        v / 4.5
    } else {
        ((v + 0.099) / 1.099).powf(1.0 / 0.45)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transfer {
    /// Code values carry the HDTV-encoded signal.
    #[default]
    Rec709,
    /// Code values are proportional to linear light.
    Linear,
}

impl std::str::FromStr for Transfer {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "rec709" | "bt709" => Ok(Self::Rec709),
            "linear" => Ok(Self::Linear),
            other => Err(format!(
                "unknown transfer '{other}' (expected rec709 or linear)"
            )),
        }
    }
}

impl Transfer {
    /// Linear value in `[0, 1]` to a 16-bit code value.
    pub fn encode(self, linear: f64) -> u16 {
        let v = match self {
            Self::Rec709 => rec709_oetf(linear),
            Self::Linear => linear,
        };
        (v.clamp(0.0, 1.0) * 65535.0).round() as u16
    }

    pub fn decode(self, code: u16) -> f64 {
        let v = f64::from(code) / 65535.0;
        match self {
            Self::Rec709 => rec709_inverse_oetf(v),
            Self::Linear => v,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartLayout {
    pub rows: usize,
    pub cols: usize,
    pub patch_px: u32,
    /// Background gap around and between patches.
    pub gap_px: u32,
    /// Linear RGB of the background.
    pub background_rgb: [f64; 3],
}

impl Default for ChartLayout {
    /// Four by four, sized for the sixteen-colour target set.
    fn default() -> Self {
        Self {
            rows: 4,
            cols: 4,
            patch_px: 128,
            gap_px: 16,
            background_rgb: [0.0; 3],
        }
    }
}

impl ChartLayout {
    pub fn width(&self) -> u32 {
        self.cols as u32 * (self.patch_px + self.gap_px) + self.gap_px
    }

    pub fn height(&self) -> u32 {
        self.rows as u32 * (self.patch_px + self.gap_px) + self.gap_px
    }

    /// Top-left pixel of the patch at `index` (row-major).
    pub fn patch_origin(&self, index: usize) -> (u32, u32) {
        let (row, col) = (index / self.cols, index % self.cols);
        let pitch = self.patch_px + self.gap_px;
        (
            self.gap_px + col as u32 * pitch,
            self.gap_px + row as u32 * pitch,
        )
    }
}

/// Where a patch colour came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatchSource {
    #[default]
    Target,
    Optimal,
    Matched,
    Atlas,
}

/// Extra per-patch description carried into the metadata.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PatchAttributes {
    /// Relative TV luminance in `[0, 1]`.
    Luminance { l_c: f64 },
    /// CAM16 lightness and UCS coordinates.
    Ucs {
        j: f64,
        a_m_prime: f64,
        b_m_prime: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartColor {
    pub name: String,
    pub rgb_linear: [f64; 3],
    pub source: PatchSource,
    pub attributes: Option<PatchAttributes>,
}

impl ChartColor {
    pub fn new(name: impl Into<String>, rgb_linear: [f64; 3], source: PatchSource) -> Self {
        Self {
            name: name.into(),
            rgb_linear,
            source,
            attributes: None,
        }
    }

    pub fn with_attributes(mut self, attributes: PatchAttributes) -> Self {
        self.attributes = Some(attributes);
        self
    }

    /// Dims the patch to a share of full brightness (1 keeps it unchanged).
    /// Linear RGB and any stored `l_c` scale together.
    pub fn with_brightness_share(mut self, share: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&share) {
            return Err(Error::InvalidParams(format!(
                "brightness share {share} outside [0, 1]"
            )));
        }
        self.rgb_linear = self.rgb_linear.map(|c| c * share);
        if let Some(PatchAttributes::Luminance { l_c }) = &mut self.attributes {
            *l_c *= share;
        }
        Ok(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchMetadata {
    pub index: usize,
    pub name: String,
    pub row: usize,
    pub col: usize,
    pub x: u32,
    pub y: u32,
    pub width: u32,
    pub height: u32,
    pub rgb_linear: [f64; 3],
    pub code_values: [u16; 3],
    /// Chromaticity of the patch on the chart's display; absent for black.
    pub xy: Option<[f64; 2]>,
    pub source: PatchSource,
    pub attributes: Option<PatchAttributes>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViewingInfo {
    pub adapting_luminance: f64,
    pub background_luminance: f64,
    pub surround: Surround,
    pub white: [f64; 3],
}

/// Settings the colours were derived under.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GenerationInfo {
    pub illuminant: String,
    pub observer: String,
    pub primaries: [[f64; 2]; 3],
    pub white: [f64; 2],
    pub viewing_conditions: Option<ViewingInfo>,
}

impl GenerationInfo {
    pub fn new(
        illuminant: impl Into<String>,
        observer: impl Into<String>,
        gamut: &DisplayGamut<f64>,
    ) -> Self {
        Self {
            illuminant: illuminant.into(),
            observer: observer.into(),
            primaries: gamut.primaries().map(|p| [p.x, p.y]),
            white: [gamut.white().x, gamut.white().y],
            viewing_conditions: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartMetadata {
    pub width: u32,
    pub height: u32,
    pub bit_depth: u8,
    pub transfer: Transfer,
    pub layout: ChartLayout,
    pub background_code: [u16; 3],
    pub generation: GenerationInfo,
    pub patches: Vec<PatchMetadata>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    /// Row-major RGB code values.
    pub pixels: Vec<[u16; 3]>,
    pub metadata: ChartMetadata,
}

/// Lays the colours out row-major and encodes them. The display gamut is
/// used for the per-patch chromaticities in the metadata.
pub fn render_chart(
    colors: &[ChartColor],
    layout: ChartLayout,
    transfer: Transfer,
    gamut: &DisplayGamut<f64>,
    generation: GenerationInfo,
) -> Result<Chart> {
    if colors.is_empty() {
        return Err(Error::EmptyColorList);
    }
    if layout.rows == 0 || layout.cols == 0 || layout.patch_px == 0 {
        return Err(Error::InvalidLayout(format!(
            "{} x {} patches of {} px",
            layout.rows, layout.cols, layout.patch_px
        )));
    }
    if layout.rows * layout.cols < colors.len() {
        return Err(Error::LayoutTooSmall {
            rows: layout.rows,
            cols: layout.cols,
            colors: colors.len(),
        });
    }
    if layout
        .background_rgb
        .iter()
        .any(|v| !(0.0..=1.0).contains(v))
    {
        return Err(Error::RgbOutOfRange {
            name: "background".into(),
            rgb: layout.background_rgb,
        });
    }
    for c in colors {
        if c.rgb_linear.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::RgbOutOfRange {
                name: c.name.clone(),
                rgb: c.rgb_linear,
            });
        }
    }

    let (width, height) = (layout.width(), layout.height());
    let background_code = layout.background_rgb.map(|v| transfer.encode(v));
    let mut pixels = vec![background_code; width as usize * height as usize];
    let mut patches = Vec::with_capacity(colors.len());
    for (index, color) in colors.iter().enumerate() {
        let code = color.rgb_linear.map(|v| transfer.encode(v));
        let (x0, y0) = layout.patch_origin(index);
        for y in y0..y0 + layout.patch_px {
            let row = y as usize * width as usize;
            pixels[row + x0 as usize..row + (x0 + layout.patch_px) as usize].fill(code);
        }
        patches.push(PatchMetadata {
            index,
            name: color.name.clone(),
            row: index / layout.cols,
            col: index % layout.cols,
            x: x0,
            y: y0,
            width: layout.patch_px,
            height: layout.patch_px,
            rgb_linear: color.rgb_linear,
            code_values: code,
            xy: xyz_to_chromaticity(gamut.rgb_to_stimulus(color.rgb_linear))
                .ok()
                .map(|c| [c.x, c.y]),
            source: color.source,
            attributes: color.attributes,
        });
    }
    Ok(Chart {
        pixels,
        metadata: ChartMetadata {
            width,
            height,
            bit_depth: 16,
            transfer,
            layout,
            background_code,
            generation,
            patches,
        },
    })
}

impl Chart {
    /// 16-bit RGB PNG without colour-management chunks.
    pub fn write_png<W: Write>(&self, out: W) -> Result<()> {
        self.write_png_with_profile(out, None)
    }

    /// As [`write_png`](Self::write_png), optionally embedding an ICC
    /// profile. The code values are unchanged either way.
    pub fn write_png_with_profile<W: Write>(
        &self,
        out: W,
        icc_profile: Option<&[u8]>,
    ) -> Result<()> {
        let mut info = png::Info::with_size(self.metadata.width, self.metadata.height);
        info.color_type = png::ColorType::Rgb;
        info.bit_depth = png::BitDepth::Sixteen;
        info.icc_profile = icc_profile.map(std::borrow::Cow::Borrowed);
        let encoder = png::Encoder::with_info(out, info)?;
        let mut writer = encoder.write_header()?;
        let bytes: Vec<u8> = self
            .pixels
            .iter()
            .flat_map(|px| px.iter().flat_map(|c| c.to_be_bytes()))
            .collect();
        writer.write_image_data(&bytes)?;
        writer.finish()?;
        Ok(())
    }

    /// Code values of the patch centre pixel.
    pub fn sample(&self, patch: &PatchMetadata) -> [u16; 3] {
        let x = patch.x + patch.width / 2;
        let y = patch.y + patch.height / 2;
        self.pixels[y as usize * self.metadata.width as usize + x as usize]
    }
}

/// Decoded 16-bit RGB image.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodedImage {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<[u16; 3]>,
}

impl DecodedImage {
    pub fn pixel(&self, x: u32, y: u32) -> [u16; 3] {
        self.pixels[y as usize * self.width as usize + x as usize]
    }
}

pub fn read_png<R: BufRead + Seek>(input: R) -> Result<DecodedImage> {
    let decoder = png::Decoder::new(input);
    let mut reader = decoder.read_info()?;
    let mut buf = vec![0; reader.output_buffer_size()];
    let info = reader.next_frame(&mut buf)?;
    if info.color_type != png::ColorType::Rgb || info.bit_depth != png::BitDepth::Sixteen {
        return Err(Error::InvalidLayout(format!(
            "expected 16-bit RGB, found {:?} at {:?}",
            info.color_type, info.bit_depth
        )));
    }
    let pixels = buf[..info.buffer_size()]
        .chunks_exact(6)
        .map(|p| {
            [
                u16::from_be_bytes([p[0], p[1]]),
                u16::from_be_bytes([p[2], p[3]]),
                u16::from_be_bytes([p[4], p[5]]),
            ]
        })
        .collect();
    Ok(DecodedImage {
        width: info.width,
        height: info.height,
        pixels,
    })
}

pub fn export_metadata<W: Write>(metadata: &ChartMetadata, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, metadata)?;
    Ok(())
}

pub fn read_metadata<R: Read>(input: R) -> Result<ChartMetadata> {
    Ok(serde_json::from_reader(input)?)
}
