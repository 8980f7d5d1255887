//! Subcommand definitions and dispatch.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use badlands::circuit::build_memory_circuit;
use badlands::dem::{build_matching_graph, extract_dem};
use badlands::experiment::{
    compute_bads, points_from_csv, points_to_csv, run_sweep, SweepConfig, SweepSummary,
    DEFAULT_EPSILON_THR, DEFAULT_ROUNDS,
};
use badlands::lattice::{build_lattice, Lattice, LocationSpec};
use badlands::matcher::decode_batch;
use badlands::noise::{
    apply_defects, heterogeneous_profile, homogeneous_profile, NoiseProfile,
};
use badlands::plot::{emit_curves, emit_heatmap, CurveSpec};
use badlands::sampler::sample;
use badlands::text;

use crate::cases;

#[derive(Parser)]
#[command(
    name = "badlands",
    version,
    about = "Rotated surface-code memory simulator: heterogeneous noise, defective qubits, and Boundaries of Acceptable Defectiveness",
    subcommand_required = true,
    arg_required_else_help = true
)]
pub struct Cli {
    /// Worker threads for sampling and decoding (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Build a noisy memory circuit and print its text form.
    Generate(GenerateArgs),
    /// Sample detection events from a circuit file.
    Sample(SampleArgs),
    /// Run a sweep described by a TOML config; writes CSV and BAD JSON.
    Sweep(SweepArgs),
    /// Compute BAD crossings from a sweep CSV.
    Bad(BadArgs),
    /// Render a noise-profile heatmap SVG.
    Heatmap(HeatmapArgs),
    /// Render performance curves from a sweep CSV.
    Curves(CurvesArgs),
    /// Run one of the built-in case-study presets (1-4) at desk scale.
    Case(CaseArgs),
}

/// Options that define a noise profile on a lattice.
#[derive(Args, Clone)]
pub struct ProfileArgs {
    /// Code distance (odd, >= 3).
    #[arg(short = 'd', long)]
    pub distance: u32,
    /// Homogeneous physical error rate.
    #[arg(long, conflicts_with_all = ["p_mu", "p_sigma", "profile"])]
    pub p: Option<f64>,
    /// Heterogeneous mean physical error rate.
    #[arg(long, requires = "p_sigma")]
    pub p_mu: Option<f64>,
    /// Heterogeneous standard deviation.
    #[arg(long, requires = "p_mu")]
    pub p_sigma: Option<f64>,
    /// Seed for the heterogeneous profile draw.
    #[arg(long, default_value_t = 0)]
    pub profile_seed: u64,
    /// Defect as "location:p_def", e.g. "center data:0.75" or "2,3:0.5".
    /// Repeatable.
    #[arg(long = "defect")]
    pub defects: Vec<String>,
    /// Load the profile from a JSON file instead.
    #[arg(long, conflicts_with_all = ["p_mu", "p_sigma"])]
    pub profile: Option<PathBuf>,
}

impl ProfileArgs {
    pub fn build(&self) -> Result<(Lattice, NoiseProfile)> {
        let lattice = build_lattice(self.distance)?;
        let base = if let Some(path) = &self.profile {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading profile {}", path.display()))?;
            let profile = NoiseProfile::from_json(&text)?;
            if profile.distance() != self.distance {
                bail!(
                    "profile is for distance {}, requested {}",
                    profile.distance(),
                    self.distance
                );
            }
            profile
        } else if let Some(p) = self.p {
            homogeneous_profile(&lattice, p)?
        } else if let (Some(p_mu), Some(p_sigma)) = (self.p_mu, self.p_sigma) {
            heterogeneous_profile(&lattice, p_mu, p_sigma, self.profile_seed)?
        } else {
            bail!("specify --p, --p-mu/--p-sigma, or --profile");
        };
        let defects = self
            .defects
            .iter()
            .map(|s| parse_defect(s))
            .collect::<Result<Vec<_>>>()?;
        let profile = apply_defects(&base, &lattice, &defects)?;
        Ok((lattice, profile))
    }
}

fn parse_defect(s: &str) -> Result<(LocationSpec, f64)> {
    let (loc, p) = s
        .rsplit_once(':')
        .with_context(|| format!("defect {s:?} is not in location:p_def form"))?;
    let p_def: f64 = p
        .trim()
        .parse()
        .with_context(|| format!("bad p_def in defect {s:?}"))?;
    Ok((LocationSpec::parse(loc)?, p_def))
}

#[derive(Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub profile: ProfileArgs,
    /// Stabilizer rounds.
    #[arg(long, default_value_t = DEFAULT_ROUNDS)]
    pub rounds: u32,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the resolved noise profile as JSON.
    #[arg(long)]
    pub emit_profile: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DumpFormat {
    /// ASCII lines of '0'/'1'.
    #[value(name = "01")]
    Ascii01,
    /// Packed little-endian bits, one byte boundary per shot.
    B8,
}

#[derive(Args)]
pub struct SampleArgs {
    /// Circuit text file.
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long, default_value_t = 1024)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "01")]
    pub format: DumpFormat,
    /// Detection-event output file (stdout when omitted, 01 format only).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Observable-flip output file.
    #[arg(long)]
    pub obs_out: Option<PathBuf>,
    /// Also decode the sample and print the logical error count.
    #[arg(long)]
    pub decode: bool,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Sweep configuration (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    /// Base name for output files.
    #[arg(long, default_value = "sweep")]
    pub name: String,
}

#[derive(Args)]
pub struct BadArgs {
    /// Sweep results CSV.
    #[arg(long)]
    pub csv: PathBuf,
    /// Target logical threshold.
    #[arg(long, default_value_t = DEFAULT_EPSILON_THR)]
    pub threshold: f64,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct HeatmapArgs {
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[arg(long, default_value = "noise profile")]
    pub title: String,
    /// Output SVG path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct CurvesArgs {
    /// Sweep results CSV.
    #[arg(long)]
    pub csv: PathBuf,
    #[arg(long, default_value_t = DEFAULT_EPSILON_THR)]
    pub threshold: f64,
    #[arg(long, default_value = "logical error rate per round")]
    pub title: String,
    /// Output SVG path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct CaseArgs {
    /// Case study number (1-4).
    pub number: u8,
    #[arg(long, default_value_t = 100_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Override the preset's distance list.
    #[arg(long, value_delimiter = ',')]
    pub distances: Vec<u32>,
    /// Heterogeneous profile draws per point (cases 3 and 4).
    #[arg(long, default_value_t = 5)]
    pub draws: u32,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(args) => generate(args),
        Command::Sample(args) => sample_cmd(args),
        Command::Sweep(args) => sweep(args),
        Command::Bad(args) => bad(args),
        Command::Heatmap(args) => heatmap(args),
        Command::Curves(args) => curves(args),
        Command::Case(args) => cases::run_case(args),
    }
}

fn write_out(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn generate(args: GenerateArgs) -> Result<()> {
    let (lattice, profile) = args.profile.build()?;
    let circuit = build_memory_circuit(&lattice, &profile, args.rounds)?;
    let text = text::serialize(&circuit);
    match &args.out {
        Some(path) => write_out(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    if let Some(path) = &args.emit_profile {
        write_out(path, profile.to_json().as_bytes())?;
    }
    Ok(())
}

fn sample_cmd(args: SampleArgs) -> Result<()> {
    let circuit_text = fs::read_to_string(&args.circuit)
        .with_context(|| format!("reading {}", args.circuit.display()))?;
    let circuit = text::parse(&circuit_text)?;
    let samples = sample(&circuit, args.shots, args.seed)?;
    match (&args.out, args.format) {
        (Some(path), DumpFormat::Ascii01) => write_out(path, samples.detectors_to_01().as_bytes())?,
        (Some(path), DumpFormat::B8) => write_out(path, &samples.detectors_to_b8())?,
        (None, DumpFormat::Ascii01) => {
            std::io::stdout().write_all(samples.detectors_to_01().as_bytes())?
        }
        (None, DumpFormat::B8) => bail!("--format b8 needs --out (binary output)"),
    }
    if let Some(path) = &args.obs_out {
        match args.format {
            DumpFormat::Ascii01 => write_out(path, samples.observables_to_01().as_bytes())?,
            DumpFormat::B8 => write_out(path, &samples.observables_to_b8())?,
        }
    }
    if args.decode {
        let graph = build_matching_graph(&extract_dem(&circuit)?);
        let (errors, shots) = decode_batch(&graph, &samples)?;
        println!("{errors} logical errors in {shots} shots");
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let config_text = fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let config = SweepConfig::from_toml(&config_text)?;
    let points = run_sweep(&config)?;
    let boundaries = compute_bads(&points, config.epsilon_thr)?;
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let csv_path = args.out_dir.join(format!("{}_results.csv", args.name));
    write_out(&csv_path, points_to_csv(&points).as_bytes())?;
    let summary = SweepSummary {
        epsilon_thr: config.epsilon_thr,
        boundaries,
    };
    let json_path = args.out_dir.join(format!("{}_bads.json", args.name));
    write_out(&json_path, summary.to_json().as_bytes())?;
    println!("wrote {}", csv_path.display());
    println!("wrote {}", json_path.display());
    Ok(())
}

fn bad(args: BadArgs) -> Result<()> {
    let text = fs::read_to_string(&args.csv)
        .with_context(|| format!("reading {}", args.csv.display()))?;
    let points = points_from_csv(&text)?;
    let boundaries = compute_bads(&points, args.threshold)?;
    let summary = SweepSummary {
        epsilon_thr: args.threshold,
        boundaries,
    };
    match &args.out {
        Some(path) => write_out(path, summary.to_json().as_bytes())?,
        None => print!("{}", summary.to_json()),
    }
    Ok(())
}

fn heatmap(args: HeatmapArgs) -> Result<()> {
    let (lattice, profile) = args.profile.build()?;
    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    emit_heatmap(&profile, &lattice, &args.title, &args.out)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn curves(args: CurvesArgs) -> Result<()> {
    let text = fs::read_to_string(&args.csv)
        .with_context(|| format!("reading {}", args.csv.display()))?;
    let points = points_from_csv(&text)?;
    let boundaries = compute_bads(&points, args.threshold)?;
    let spec = CurveSpec {
        title: args.title.clone(),
        threshold: Some(args.threshold),
        ..CurveSpec::default()
    };
    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    emit_curves(&points, &boundaries, &spec, &args.out)?;
    println!("wrote {}", args.out.display());
    Ok(())
}
