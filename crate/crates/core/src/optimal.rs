//! Rectangular "optimal color" reflectances and the inverse problem of finding
//! the cut wavelengths that reproduce a target chromaticity.
//!
//! A band-pass spectrum reflects `K` on `[lambda1, lambda2]`; a band-stop
//! spectrum reflects `K` on `[360, lambda1]` and `[lambda2, 720]`. Cut
//! wavelengths are continuous: a sample at `w` nm stands for the bin
//! `[w, w + step)` and receives the covered fraction of `K`, so a cut at
//! 480.4 nm fills the 480 nm bin at 0.6 of `K` on the pass side. The last grid
//! sample is the closed red end and is covered whenever `lambda2` reaches it.
//! Band-stop is the exact complement of band-pass, so the two always add up to
//! the flat spectrum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colorimetry::{delta_e_xyz, xyz_to_chromaticity, Chromaticity};
use crate::dominant::{dominant_wavelength, inside_spectral_locus, DominantWavelength};
use crate::error::{Error, Result};
use crate::observer::Colorimeter;
use crate::rgb::{DisplayGamut, TargetColor};
use crate::scalar::Scalar;
use crate::simplex::{Minimum, NelderMead};
use crate::spectrum::{Grid, SpectralDistribution, LAMBDA_MAX, LAMBDA_MIN, WORKING_GRID};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Genus {
    /// Single pass band `[lambda1, lambda2]`.
    BandPass,
    /// Two pass regions touching the ends of the spectrum.
    BandStop,
}

impl std::str::FromStr for Genus {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "band_pass" | "band-pass" | "bandpass" | "pass" => Ok(Self::BandPass),
            "band_stop" | "band-stop" | "bandstop" | "stop" => Ok(Self::BandStop),
            other => Err(format!(
                "unknown genus '{other}' (expected band_pass or band_stop)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimalSpectrumParams<T> {
    pub genus: Genus,
    pub lambda1_nm: T,
    pub lambda2_nm: T,
    /// Reflectance amplitude.
    #[serde(rename = "K")]
    pub k: T,
}

impl<T: Scalar> OptimalSpectrumParams<T> {
    pub fn new(genus: Genus, lambda1_nm: T, lambda2_nm: T, k: T) -> Result<Self> {
        let p = Self {
            genus,
            lambda1_nm,
            lambda2_nm,
            k,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let lo = T::lit(f64::from(LAMBDA_MIN));
        let hi = T::lit(f64::from(LAMBDA_MAX));
        for l in [self.lambda1_nm, self.lambda2_nm] {
            if !l.is_finite() || l < lo || l > hi {
                return Err(Error::InvalidParams(format!(
                    "cut wavelength {l} outside {LAMBDA_MIN}..{LAMBDA_MAX} nm"
                )));
            }
        }
        if self.lambda1_nm > self.lambda2_nm {
            return Err(Error::CutOrder {
                lambda1: self.lambda1_nm.as_f64(),
                lambda2: self.lambda2_nm.as_f64(),
            });
        }
        if !self.k.is_finite() || self.k < T::zero() {
            return Err(Error::InvalidParams(format!(
                "amplitude K = {} must be non-negative",
                self.k
            )));
        }
        Ok(())
    }

    pub fn with_k(self, k: T) -> Self {
        Self { k, ..self }
    }

    /// `K * 100`, the reflectance level in percent-of-unit form.
    pub fn k_times_100(&self) -> T {
        self.k * T::lit(100.0)
    }
}

/// Pass-band coverage of each bin of `grid`.
fn pass_coverage<T: Scalar>(lambda1: T, lambda2: T, grid: Grid, out: &mut Vec<T>) {
    out.clear();
    let step = T::lit(f64::from(grid.step_nm));
    let end = T::lit(f64::from(grid.end_nm()));
    let upper = if lambda2 >= end { end + step } else { lambda2 };
    for w in grid.wavelengths() {
        let lo = T::lit(f64::from(w));
        let hi = lo + step;
        let covered = (hi.min(upper) - lo.max(lambda1)) / step;
        out.push(covered.max(T::zero()).min(T::one()));
    }
}

fn fill_spectrum<T: Scalar>(params: &OptimalSpectrumParams<T>, grid: Grid, out: &mut Vec<T>) {
    pass_coverage(params.lambda1_nm, params.lambda2_nm, grid, out);
    for v in out.iter_mut() {
        *v = match params.genus {
            Genus::BandPass => params.k * *v,
            Genus::BandStop => params.k * (T::one() - *v),
        };
    }
}

/// Rectangular reflectance on `grid`.
pub fn synthesize<T: Scalar>(
    params: &OptimalSpectrumParams<T>,
    grid: Grid,
) -> Result<SpectralDistribution<T>> {
    params.validate()?;
    let mut values = Vec::with_capacity(grid.count);
    fill_spectrum(params, grid, &mut values);
    Ok(SpectralDistribution::from_parts_unchecked(grid, values))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenusChoice {
    Fixed(Genus),
    /// Band-stop for purple targets and for hues in the red or violet sectors.
    Auto,
}

/// Band-stop when the dominant-wavelength query is complementary or the hue
/// lies below 480 nm or above 595 nm, otherwise band-pass.
pub fn auto_genus<T: Scalar>(target: &Chromaticity<T>, colorimeter: &Colorimeter<T>) -> Genus {
    let white = colorimeter.white_chromaticity();
    match dominant_wavelength(target, &white, colorimeter.tables()) {
        Ok(DominantWavelength::Complementary(_)) => Genus::BandStop,
        Ok(DominantWavelength::Dominant(w)) if w < T::lit(480.0) || w > T::lit(595.0) => {
            Genus::BandStop
        }
        _ => Genus::BandPass,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions<T> {
    /// Convergence threshold on the achieved xyz distance.
    pub tolerance: T,
    /// Starting cut wavelengths.
    pub init: [T; 2],
    pub max_iterations: usize,
    /// Simplex stopping rule (vertex spread in nm).
    pub x_tolerance: T,
    /// Simplex stopping rule (objective spread).
    pub f_tolerance: T,
}

impl<T: Scalar> Default for SolveOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: T::lit(1e-5),
            init: [T::lit(490.0), T::lit(545.0)],
            max_iterations: 500,
            x_tolerance: T::lit(1e-6),
            f_tolerance: T::lit(1e-12),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport<T> {
    #[serde(flatten)]
    pub params: OptimalSpectrumParams<T>,
    #[serde(rename = "delta_e")]
    pub achieved_delta_e: T,
    pub iterations: usize,
    pub converged: bool,
}

/// Objective evaluator reused across simplex iterations.
struct Objective<'a, T> {
    target: Chromaticity<T>,
    genus: Genus,
    colorimeter: &'a Colorimeter<T>,
    buffer: Vec<T>,
}

impl<T: Scalar> Objective<'_, T> {
    fn clamp(p: &[T; 2]) -> (T, T) {
        let lo = T::lit(f64::from(LAMBDA_MIN));
        let hi = T::lit(f64::from(LAMBDA_MAX));
        (p[0].max(lo).min(hi), p[1].max(lo).min(hi))
    }

    fn eval(&mut self, p: &[T; 2]) -> T {
        let (l1, l2) = Self::clamp(p);
        if l1 > l2 {
            return T::infinity();
        }
        let params = OptimalSpectrumParams {
            genus: self.genus,
            lambda1_nm: l1,
            lambda2_nm: l2,
            k: T::one(),
        };
        fill_spectrum(&params, WORKING_GRID, &mut self.buffer);
        match xyz_to_chromaticity(self.colorimeter.integrate(&self.buffer)) {
            Ok(c) => delta_e_xyz(&self.target, &c),
            Err(_) => T::infinity(),
        }
    }
}

/// Finds the cut wavelengths whose rectangular spectrum has the target
/// chromaticity. `K` is 1 in the result; see [`scale_to_luminance`].
pub fn solve_optimal<T: Scalar>(
    target: &Chromaticity<T>,
    genus: GenusChoice,
    options: &SolveOptions<T>,
    colorimeter: &Colorimeter<T>,
) -> Result<SolveReport<T>> {
    target.validate()?;
    if !inside_spectral_locus(target, colorimeter.tables()) {
        return Err(Error::UnreachableTarget {
            x: target.x.as_f64(),
            y: target.y.as_f64(),
        });
    }
    let genus = match genus {
        GenusChoice::Fixed(g) => g,
        GenusChoice::Auto => auto_genus(target, colorimeter),
    };
    let mut objective = Objective {
        target: *target,
        genus,
        colorimeter,
        buffer: Vec::with_capacity(WORKING_GRID.count),
    };
    let simplex = NelderMead::default()
        .with_tolerances(options.x_tolerance, options.f_tolerance)
        .with_max_iterations(options.max_iterations);

    let first: Minimum<T, 2> = simplex.minimize(|p| objective.eval(p), options.init);
    let mut best = first;
    let mut iterations = first.iterations;
    // A simplex can collapse on the flat region past a clamped bound, so the
    // restart runs even when the first pass is already within tolerance.
    {
        // fresh simplex, stepping away from any bound the point sits on
        let (l1, l2) = Objective::<T>::clamp(&first.point);
        let hi = T::lit(f64::from(LAMBDA_MAX));
        let steps = [l1, l2].map(|l| {
            let step = l * T::lit(0.05);
            if l + step > hi {
                -step
            } else {
                step
            }
        });
        let second = simplex.minimize_with_steps(|p| objective.eval(p), [l1, l2], steps);
        iterations += second.iterations;
        if second.value < best.value {
            best = second;
        }
    }
    let (l1, l2) = Objective::<T>::clamp(&best.point);
    Ok(SolveReport {
        params: OptimalSpectrumParams {
            genus,
            lambda1_nm: l1,
            lambda2_nm: l2,
            k: T::one(),
        },
        achieved_delta_e: best.value,
        iterations,
        converged: best.value <= options.tolerance,
    })
}

/// Sets `K` so that `K * Y(K = 1) = L_C`, with `Y` on the 0-100 scale and
/// `L_C` the TV-side relative luminance. Chromaticity is unchanged.
pub fn scale_to_luminance<T: Scalar>(
    params: &OptimalSpectrumParams<T>,
    target_luminance: T,
    colorimeter: &Colorimeter<T>,
) -> Result<OptimalSpectrumParams<T>> {
    if !target_luminance.is_finite() || target_luminance < T::zero() || target_luminance > T::one()
    {
        return Err(Error::InvalidParams(format!(
            "relative luminance {target_luminance} outside [0, 1]"
        )));
    }
    let unit = synthesize(&params.with_k(T::one()), WORKING_GRID)?;
    let y = colorimeter.spd_to_xyz(&unit)?.y;
    if !(y > T::zero()) {
        return Err(Error::ZeroLuminance);
    }
    Ok(params.with_k(target_luminance / y))
}

/// One column of the HDTV optimal-color table.
#[derive(Clone, Debug, PartialEq)]
pub struct Table1Column {
    pub name: &'static str,
    pub rgb_weights: [f64; 3],
    pub genus: Genus,
}

/// Saturation-`s` mix of primary weights with equal-energy white weights.
pub fn saturation_mix(weights: [f64; 3], s: f64) -> [f64; 3] {
    weights.map(|w| s * w + (1.0 - s) / 3.0)
}

/// The ten columns: primaries, secondaries, half-saturated primaries, white.
pub fn table1_columns() -> Vec<Table1Column> {
    use Genus::*;
    let col = |name, rgb_weights, genus| Table1Column {
        name,
        rgb_weights,
        genus,
    };
    vec![
        col("R", [1.0, 0.0, 0.0], BandStop),
        col("G", [0.0, 1.0, 0.0], BandPass),
        col("B", [0.0, 0.0, 1.0], BandStop),
        col("Ye", [0.5, 0.5, 0.0], BandPass),
        col("C", [0.0, 0.5, 0.5], BandPass),
        col("M", [0.5, 0.0, 0.5], BandStop),
        col("R0.5", saturation_mix([1.0, 0.0, 0.0], 0.5), BandStop),
        col("G0.5", saturation_mix([0.0, 1.0, 0.0], 0.5), BandPass),
        col("B0.5", saturation_mix([0.0, 0.0, 1.0], 0.5), BandStop),
        col("WW", [1.0, 1.0, 1.0], BandPass),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table1Entry<T> {
    pub name: &'static str,
    pub target: TargetColor<T>,
    /// Solved cut wavelengths with `K` scaled to the target's luminance.
    pub report: SolveReport<T>,
}

/// Solves every column. Targets use the HDTV primaries balanced to the
/// colorimeter's own white, so the white column is the perfect reflector.
pub fn table1_suite<T: Scalar>(
    colorimeter: &Colorimeter<T>,
    options: &SolveOptions<T>,
) -> Result<Vec<Table1Entry<T>>> {
    let gamut = DisplayGamut::rec709_with_white(colorimeter.white_chromaticity());
    table1_columns()
        .into_par_iter()
        .map(|col| {
            let target = gamut.target(col.name, col.rgb_weights.map(T::lit))?;
            let solved = solve_optimal(
                &target.chromaticity,
                GenusChoice::Fixed(col.genus),
                options,
                colorimeter,
            )?;
            let params = scale_to_luminance(&solved.params, target.luminance, colorimeter)?;
            Ok(Table1Entry {
                name: col.name,
                target,
                report: SolveReport { params, ..solved },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(l1: f64, l2: f64) -> OptimalSpectrumParams<f64> {
        OptimalSpectrumParams::new(Genus::BandPass, l1, l2, 1.0).unwrap()
    }

    fn bs(l1: f64, l2: f64) -> OptimalSpectrumParams<f64> {
        OptimalSpectrumParams::new(Genus::BandStop, l1, l2, 1.0).unwrap()
    }

    #[test]
    fn full_band_pass_is_flat() {
        let s = synthesize(&bp(360.0, 720.0), WORKING_GRID).unwrap();
        assert!(s.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn full_band_stop_is_zero_inside() {
        let s = synthesize(&bs(360.0, 720.0), WORKING_GRID).unwrap();
        assert!((361..=719).all(|w| s.at(w) == Some(0.0)));
    }

    #[test]
    fn band_membership() {
        let s = synthesize(&bp(480.0, 609.0), WORKING_GRID).unwrap();
        assert_eq!(s.at(500), Some(1.0));
        assert_eq!(s.at(450), Some(0.0));
        assert_eq!(s.at(480), Some(1.0));
        assert_eq!(s.at(609), Some(0.0));
        assert_eq!(s.at(608), Some(1.0));
    }

    #[test]
    fn fractional_cut_coverage() {
        let s = synthesize(&bp(480.4, 600.25), WORKING_GRID).unwrap();
        assert!((s.at(480).unwrap() - 0.6).abs() < 1e-12);
        assert!((s.at(600).unwrap() - 0.25).abs() < 1e-12);
        let s = synthesize(&bs(480.4, 600.25), WORKING_GRID).unwrap();
        assert!((s.at(480).unwrap() - 0.4).abs() < 1e-12);
        assert!((s.at(600).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn cut_order_is_validated() {
        assert!(matches!(
            OptimalSpectrumParams::new(Genus::BandPass, 600.0, 500.0, 1.0),
            Err(Error::CutOrder { .. })
        ));
        assert!(OptimalSpectrumParams::new(Genus::BandPass, 350.0, 500.0, 1.0).is_err());
        assert!(OptimalSpectrumParams::new(Genus::BandPass, 400.0, 500.0, -1.0).is_err());
    }

    #[test]
    fn green_solve_from_default_start() {
        let c = Colorimeter::<f64>::standard();
        let target = Chromaticity::new(0.30, 0.60).unwrap();
        let r = solve_optimal(
            &target,
            GenusChoice::Fixed(Genus::BandPass),
            &SolveOptions::default(),
            &c,
        )
        .unwrap();
        assert!(r.converged, "{r:?}");
        assert!(r.achieved_delta_e <= 1e-5);
        assert!((r.params.lambda1_nm - 481.0).abs() <= 3.0, "{r:?}");
        assert!((r.params.lambda2_nm - 592.0).abs() <= 3.0, "{r:?}");
    }

    #[test]
    fn red_band_stop_solve() {
        let c = Colorimeter::<f64>::standard();
        let target = Chromaticity::new(0.64, 0.33).unwrap();
        let r = solve_optimal(
            &target,
            GenusChoice::Fixed(Genus::BandStop),
            &SolveOptions::default(),
            &c,
        )
        .unwrap();
        assert!(r.converged, "{r:?}");
        assert!((r.params.lambda1_nm - 412.0).abs() <= 3.0, "{r:?}");
        assert!((r.params.lambda2_nm - 584.0).abs() <= 3.0, "{r:?}");
    }

    #[test]
    fn white_solves_to_full_band() {
        let c = Colorimeter::<f64>::standard();
        let r = solve_optimal(
            &c.white_chromaticity(),
            GenusChoice::Fixed(Genus::BandPass),
            &SolveOptions::default(),
            &c,
        )
        .unwrap();
        assert!(r.converged, "{r:?}");
        assert!((r.params.lambda1_nm - 360.0).abs() < 1e-6);
        assert!((r.params.lambda2_nm - 720.0).abs() < 1e-6);
    }

    #[test]
    fn outside_locus_is_unreachable() {
        let c = Colorimeter::<f64>::standard();
        let target = Chromaticity::new(0.05, 0.05).unwrap();
        let r = solve_optimal(&target, GenusChoice::Auto, &SolveOptions::default(), &c);
        assert!(matches!(r, Err(Error::UnreachableTarget { .. })));
    }

    #[test]
    fn auto_genus_follows_hue() {
        let c = Colorimeter::<f64>::standard();
        let g = |x, y| auto_genus(&Chromaticity::new(x, y).unwrap(), &c);
        assert_eq!(g(0.64, 0.33), Genus::BandStop);
        assert_eq!(g(0.15, 0.06), Genus::BandStop);
        assert_eq!(g(0.3209, 0.1542), Genus::BandStop);
        assert_eq!(g(0.30, 0.60), Genus::BandPass);
        assert_eq!(g(0.2246, 0.3287), Genus::BandPass);
    }

    #[test]
    fn luminance_scaling() {
        let c = Colorimeter::<f64>::standard();
        let ww = scale_to_luminance(&bp(360.0, 720.0), 1.0, &c).unwrap();
        assert!((ww.k - 0.01).abs() < 1e-12);
        let zero = scale_to_luminance(&bp(480.0, 609.0), 0.0, &c).unwrap();
        assert_eq!(zero.k, 0.0);
        // chromaticity untouched
        let a = c
            .chromaticity(&synthesize(&bp(480.0, 609.0), WORKING_GRID).unwrap())
            .unwrap();
        let scaled = scale_to_luminance(&bp(480.0, 609.0), 0.464, &c).unwrap();
        let b = c
            .chromaticity(&synthesize(&scaled, WORKING_GRID).unwrap())
            .unwrap();
        assert!(delta_e_xyz(&a, &b) < 1e-14);
        let y = c
            .spd_to_xyz(&synthesize(&scaled, WORKING_GRID).unwrap())
            .unwrap()
            .y;
        assert!((y - 0.464).abs() < 1e-12);
    }

    #[test]
    fn zero_luminance_spectrum_rejected() {
        let c = Colorimeter::<f64>::standard();
        let r = scale_to_luminance(&bp(500.0, 500.0), 0.5, &c);
        assert!(matches!(r, Err(Error::ZeroLuminance)));
    }

    #[test]
    fn saturation_mix_half_red() {
        let w = saturation_mix([1.0, 0.0, 0.0], 0.5);
        assert!((w[0] - 0.667).abs() < 1e-3);
        assert!((w[1] - 0.167).abs() < 1e-3);
        assert!((w[2] - 0.167).abs() < 1e-3);
    }

    #[test]
    fn report_json_fields() {
        let r = SolveReport {
            params: bp(480.0, 609.0).with_k(0.00908),
            achieved_delta_e: 1e-7,
            iterations: 42,
            converged: true,
        };
        let v: serde_json::Value = serde_json::to_value(r).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(
            keys,
            [
                "K",
                "converged",
                "delta_e",
                "genus",
                "iterations",
                "lambda1_nm",
                "lambda2_nm"
            ]
        );
        assert_eq!(v["genus"], "band_pass");
    }
}
