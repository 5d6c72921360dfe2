//! Command-line front end. Every subcommand is a thin adapter over the
//! `chromatest` library; `run` is exposed so tests can drive it in-process.

mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use chromatest::atlas::generate_atlas;
use chromatest::chart::{export_metadata, GenerationInfo, PatchAttributes};
use chromatest::optimal::{scale_to_luminance, solve_optimal, table1_suite, Table1Entry};
use chromatest::spectra_db::{build_target_set, load_database, match_nearest, write_match_csv};
use chromatest::{
    render_chart, AtlasSpec, ChartColor, ChartLayout, Chromaticity, Format, Genus, GenusChoice,
    Observer, PatchSource, SolveOptions, SolveReport, Surround, TargetColor, Transfer,
};
use clap::{Args, Parser, Subcommand};

pub use config::{RunConfig, Settings, DEFAULT_LA, DEFAULT_YB};

#[derive(Debug, Parser)]
#[command(
    name = "chromatest",
    version,
    about = "Colorimetric test material for video paths"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Default, Args)]
pub struct GlobalArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// D65, A, E, or a `wavelength_nm,value` CSV file.
    #[arg(long, global = true)]
    pub illuminant: Option<String>,
    /// degree2 or degree10.
    #[arg(long, global = true)]
    pub observer: Option<Observer>,
    /// Adapting luminance in cd/m^2 [default: 50].
    #[arg(long, global = true)]
    pub la: Option<f64>,
    /// Relative background luminance [default: 20].
    #[arg(long, global = true)]
    pub yb: Option<f64>,
    /// average, dim or dark [default: average].
    #[arg(long, global = true)]
    pub surround: Option<Surround>,
    /// Degree of adaptation in [0, 1]; derived from the surround when omitted.
    #[arg(long, global = true)]
    pub d: Option<f64>,
    /// Display primaries as xr,yr,xg,yg,xb,yb [default: HDTV].
    #[arg(long, global = true, value_parser = parse_list::<6>)]
    pub primaries: Option<[f64; 6]>,
    /// Display white as x,y [default: 0.3127,0.3290].
    #[arg(long, global = true, value_parser = parse_list::<2>)]
    pub white: Option<[f64; 2]>,
    /// Directory for relative output paths.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    /// Full-precision JSON on stdout instead of the text report.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cut wavelengths of the rectangular spectrum matching a chromaticity.
    SolveOptimal {
        /// Target chromaticity as x,y.
        #[arg(long, value_parser = parse_list::<2>)]
        target: [f64; 2],
        /// auto, band_pass or band_stop.
        #[arg(long, default_value = "auto")]
        genus: String,
        /// Scale K so the spectrum has this relative luminance in [0, 1].
        #[arg(long)]
        lc: Option<f64>,
        /// Starting cut wavelengths as l1,l2 [default: 490,545].
        #[arg(long, value_parser = parse_list::<2>)]
        init: Option<[f64; 2]>,
    },
    /// Optimal spectra for the ten HDTV reference colours.
    Table1,
    /// The sixteen-colour HDTV target set.
    Targets,
    /// Nearest database spectrum for every target colour.
    Match {
        #[arg(long)]
        db: PathBuf,
        /// wide or long.
        #[arg(long, default_value = "wide")]
        format: Format,
        /// Write the CSV report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Constant-lightness slice of CAM16-UCS inside the display gamut.
    Atlas {
        /// CAM16 lightness J.
        #[arg(long)]
        j: f64,
        #[arg(long, default_value_t = 2.0)]
        spacing: f64,
        /// Lattice half-extent in a' and b'.
        #[arg(long, default_value_t = 60.0)]
        bound: f64,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Scatter plot in the (a', b') plane.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Scatter plot in the xy chromaticity diagram.
        #[arg(long)]
        svg_xy: Option<PathBuf>,
    },
    /// 16-bit PNG chart with a JSON metadata sidecar.
    Chart {
        #[arg(long)]
        out: PathBuf,
        /// Sidecar path [default: OUT with a .meta.json extension].
        #[arg(long)]
        metadata: Option<PathBuf>,
        /// JSON list of patch colours; the target set when omitted.
        #[arg(long)]
        colors: Option<PathBuf>,
        /// Store linear values instead of the Rec.709 OETF.
        #[arg(long)]
        linear: bool,
        /// Percentage of full brightness applied to every patch.
        #[arg(long, default_value_t = 100.0)]
        brightness_share: f64,
        /// ICC profile to embed; none by default since the chart is signal-referred.
        #[arg(long)]
        icc_profile: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 4)]
        cols: usize,
        #[arg(long, default_value_t = 128)]
        patch_px: u32,
        #[arg(long, default_value_t = 16)]
        gap_px: u32,
    },
}

/// A failure with its exit status: 1 for bad inputs, 2 for bad usage.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn domain(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

type CliResult = Result<(), CliError>;

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::domain(format!("{}: {e}", path.display()))
}

/// Parses `argv` (program name first), runs it, and returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let settings = Settings::resolve(&cli.global)?;
    let json = cli.global.json;
    match &cli.command {
        Command::SolveOptimal {
            target,
            genus,
            lc,
            init,
        } => {
            let genus = parse_genus(genus)?;
            let mut options = SolveOptions::default();
            if let Some(init) = init {
                options.init = *init;
            }
            let report = solve_command(&settings, *target, genus, *lc, &options)?;
            if json {
                write_json(out, &report)?;
            } else {
                write_report(out, &report)?;
            }
            if !report.converged {
                return Err(CliError::domain(format!(
                    "target ({}, {}): solver did not converge (delta_e {})",
                    target[0],
                    target[1],
                    sig6(report.achieved_delta_e)
                )));
            }
            Ok(())
        }
        Command::Table1 => {
            let suite = table1_suite(&settings.colorimeter, &SolveOptions::default())
                .map_err(|e| CliError::domain(format!("table1: {e}")))?;
            if json {
                write_json(out, &suite)?;
            } else {
                write_table1(out, &suite)?;
            }
            let failed: Vec<&str> = suite
                .iter()
                .filter(|e| !e.report.converged)
                .map(|e| e.name)
                .collect();
            if !failed.is_empty() {
                return Err(CliError::domain(format!(
                    "table1: no convergence for {}",
                    failed.join(", ")
                )));
            }
            Ok(())
        }
        Command::Targets => {
            let targets = build_target_set(&settings.gamut);
            if json {
                write_json(out, &targets)
            } else {
                write_targets(out, &targets)
            }
        }
        Command::Match {
            db,
            format,
            out: path,
        } => {
            let records =
                load_database(db, *format, &settings.colorimeter).map_err(|e| match e {
                    chromatest::Error::DatabaseNotFound(_) => CliError::domain(e.to_string()),
                    other => CliError::domain(format!("database {}: {other}", db.display())),
                })?;
            let targets = build_target_set(&settings.gamut);
            let results = match_nearest(&targets, &records)
                .map_err(|e| CliError::domain(format!("match: {e}")))?;
            match path {
                Some(path) => {
                    let path = settings.output_path(path);
                    let file = File::create(&path).map_err(io_err(&path))?;
                    write_match_csv(&results, BufWriter::new(file)).map_err(lib_err(&path))?;
                    if json {
                        write_json(out, &results)?;
                    }
                    Ok(())
                }
                None if json => write_json(out, &results),
                None => write_match_csv(&results, out)
                    .map_err(|e| CliError::domain(format!("match: {e}"))),
            }
        }
        Command::Atlas {
            j,
            spacing,
            bound,
            out: path,
            svg,
            svg_xy,
        } => {
            let spec = AtlasSpec::new(settings.viewing_conditions()?, *j)
                .with_spacing(*spacing)
                .with_bound(*bound)
                .with_gamut(settings.gamut.clone());
            let atlas =
                generate_atlas(&spec).map_err(|e| CliError::domain(format!("atlas J={j}: {e}")))?;
            if let Some(svg) = svg {
                write_file(&settings.output_path(svg), atlas.to_svg(*bound).as_bytes())?;
            }
            if let Some(svg) = svg_xy {
                write_file(
                    &settings.output_path(svg),
                    atlas.to_svg_xy(&spec.gamut).as_bytes(),
                )?;
            }
            match path {
                Some(path) => {
                    let path = settings.output_path(path);
                    let file = File::create(&path).map_err(io_err(&path))?;
                    atlas
                        .write_csv(BufWriter::new(file))
                        .map_err(lib_err(&path))?;
                    if json {
                        write_json(out, &atlas)
                    } else {
                        writeln!(
                            out,
                            "atlas J={}: {} points, {} inversion failures, max M' {}",
                            sig6(*j),
                            atlas.len(),
                            atlas.inversion_failures,
                            sig6(atlas.max_radius())
                        )
                        .map_err(stdout_err)
                    }
                }
                None if json => write_json(out, &atlas),
                None => atlas
                    .write_csv(out)
                    .map_err(|e| CliError::domain(format!("atlas: {e}"))),
            }
        }
        Command::Chart {
            out: path,
            metadata,
            colors,
            linear,
            brightness_share,
            icc_profile,
            rows,
            cols,
            patch_px,
            gap_px,
        } => {
            let colors = match colors {
                Some(p) => {
                    let file = File::open(p).map_err(io_err(p))?;
                    serde_json::from_reader::<_, Vec<ChartColor>>(BufReader::new(file))
                        .map_err(|e| CliError::domain(format!("colors {}: {e}", p.display())))?
                }
                None => target_chart_colors(&settings.gamut),
            };
            let colors = colors
                .into_iter()
                .map(|c| c.with_brightness_share(brightness_share / 100.0))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::domain(format!("--brightness-share: {e}")))?;
            let profile = match icc_profile {
                Some(p) => Some(std::fs::read(p).map_err(io_err(p))?),
                None => None,
            };
            let layout = ChartLayout {
                rows: *rows,
                cols: *cols,
                patch_px: *patch_px,
                gap_px: *gap_px,
                ..ChartLayout::default()
            };
            let transfer = if *linear {
                Transfer::Linear
            } else {
                Transfer::Rec709
            };
            let generation = GenerationInfo::new(
                &settings.illuminant_label,
                settings.observer.to_string(),
                &settings.gamut,
            );
            let chart = render_chart(&colors, layout, transfer, &settings.gamut, generation)
                .map_err(|e| CliError::domain(format!("chart: {e}")))?;
            let png = settings.output_path(path);
            let sidecar = match metadata {
                Some(m) => settings.output_path(m),
                None => png.with_extension("meta.json"),
            };
            let file = File::create(&png).map_err(io_err(&png))?;
            chart
                .write_png_with_profile(BufWriter::new(file), profile.as_deref())
                .map_err(lib_err(&png))?;
            let file = File::create(&sidecar).map_err(io_err(&sidecar))?;
            export_metadata(&chart.metadata, BufWriter::new(file)).map_err(lib_err(&sidecar))?;
            if json {
                write_json(out, &chart.metadata)
            } else {
                writeln!(
                    out,
                    "chart {}x{}: {} patches -> {}, {}",
                    chart.metadata.width,
                    chart.metadata.height,
                    chart.metadata.patches.len(),
                    png.display(),
                    sidecar.display()
                )
                .map_err(stdout_err)
            }
        }
    }
}

/// The solver step of `solve-optimal`, with optional luminance scaling.
pub fn solve_command(
    settings: &Settings,
    target: [f64; 2],
    genus: GenusChoice,
    lc: Option<f64>,
    options: &SolveOptions,
) -> Result<SolveReport, CliError> {
    let name = format!("target ({}, {})", target[0], target[1]);
    let xy = Chromaticity::new(target[0], target[1])
        .map_err(|e| CliError::domain(format!("{name}: {e}")))?;
    let mut report = solve_optimal(&xy, genus, options, &settings.colorimeter)
        .map_err(|e| CliError::domain(format!("{name}: {e}")))?;
    if let Some(lc) = lc {
        report.params = scale_to_luminance(&report.params, lc, &settings.colorimeter)
            .map_err(|e| CliError::domain(format!("{name}: luminance {lc}: {e}")))?;
    }
    Ok(report)
}

/// Chart colours for the target set, in target-set order.
pub fn target_chart_colors(gamut: &chromatest::DisplayGamut) -> Vec<ChartColor> {
    build_target_set(gamut)
        .into_iter()
        .map(|t| {
            ChartColor::new(t.name, t.rgb_weights, PatchSource::Target)
                .with_attributes(PatchAttributes::Luminance { l_c: t.luminance })
        })
        .collect()
}

/// Comma-separated list of exactly `N` numbers, e.g. `0.64,0.33`.
fn parse_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!(
            "expected {N} comma-separated numbers, got {}",
            parts.len()
        ));
    }
    let mut v = [0.0; N];
    for (slot, part) in v.iter_mut().zip(parts) {
        *slot = part
            .parse()
            .map_err(|_| format!("'{part}' is not a number"))?;
    }
    Ok(v)
}

fn parse_genus(s: &str) -> Result<GenusChoice, CliError> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(GenusChoice::Auto);
    }
    s.parse::<Genus>()
        .map(GenusChoice::Fixed)
        .map_err(|e| CliError::usage(format!("--genus {s}: {e}")))
}

fn lib_err(path: &Path) -> impl Fn(chromatest::Error) -> CliError + '_ {
    move |e| CliError::domain(format!("{}: {e}", path.display()))
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::domain(format!("stdout: {e}"))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult {
    std::fs::write(path, bytes).map_err(io_err(path))
}

/// Pretty JSON followed by a newline.
pub fn write_json<T: serde::Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> CliResult {
    serde_json::to_writer_pretty(&mut *out, value)
        .map_err(|e| CliError::domain(format!("stdout: {e}")))?;
    writeln!(out).map_err(stdout_err)
}

/// Six significant digits; scientific notation for very small or large values.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        format!("{:.*}", (5 - exp) as usize, v)
    } else {
        format!("{v:.5e}")
    }
}

fn write_report(out: &mut dyn Write, r: &SolveReport) -> CliResult {
    let p = &r.params;
    let genus = match p.genus {
        Genus::BandPass => "band_pass",
        Genus::BandStop => "band_stop",
    };
    (|| -> std::io::Result<()> {
        writeln!(out, "genus       {genus}")?;
        writeln!(out, "lambda1_nm  {}", sig6(p.lambda1_nm))?;
        writeln!(out, "lambda2_nm  {}", sig6(p.lambda2_nm))?;
        writeln!(out, "K           {}", sig6(p.k))?;
        writeln!(out, "delta_e     {}", sig6(r.achieved_delta_e))?;
        writeln!(out, "iterations  {}", r.iterations)?;
        writeln!(out, "converged   {}", r.converged)
    })()
    .map_err(stdout_err)
}

fn write_table1(out: &mut dyn Write, suite: &[Table1Entry<f64>]) -> CliResult {
    (|| -> std::io::Result<()> {
        writeln!(out, "name  genus      L_C       x         y         lambda1   lambda2   K*100     delta_e      converged")?;
        for e in suite {
            let p = &e.report.params;
            let genus = match p.genus {
                Genus::BandPass => "band_pass",
                Genus::BandStop => "band_stop",
            };
            writeln!(
                out,
                "{:<5} {genus:<10} {:<9} {:<9} {:<9} {:<9} {:<9} {:<9} {:<12} {}",
                e.name,
                sig6(e.target.luminance),
                sig6(e.target.chromaticity.x),
                sig6(e.target.chromaticity.y),
                sig6(p.lambda1_nm),
                sig6(p.lambda2_nm),
                sig6(p.k_times_100()),
                sig6(e.report.achieved_delta_e),
                e.report.converged
            )?;
        }
        Ok(())
    })()
    .map_err(stdout_err)
}

fn write_targets(out: &mut dyn Write, targets: &[TargetColor]) -> CliResult {
    (|| -> std::io::Result<()> {
        writeln!(
            out,
            "name  r         g         b         x         y         L_C"
        )?;
        for t in targets {
            let [r, g, b] = t.rgb_weights;
            writeln!(
                out,
                "{:<5} {:<9} {:<9} {:<9} {:<9} {:<9} {}",
                t.name,
                sig6(r),
                sig6(g),
                sig6(b),
                sig6(t.chromaticity.x),
                sig6(t.chromaticity.y),
                sig6(t.luminance)
            )?;
        }
        Ok(())
    })()
    .map_err(stdout_err)
}
