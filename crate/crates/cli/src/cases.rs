//! The four built-in case-study presets.
//!
//! Case 1: uniform homogeneous noise across distances.
//! Case 2: homogeneous noise plus a center-data defect swept over p_def.
//! Case 3: heterogeneous noise over a range of deviations (sigma = 0 is the
//!         homogeneous baseline series).
//! Case 4: heterogeneous noise at sigma = 0.006 plus the center-data defect
//!         sweep.
//!
//! Each preset sweeps the physical-rate axis over a log-spaced grid,
//! writes `caseN_results.csv` and `caseN_bads.json`, renders performance
//! curves and a d=5 heatmap, and prints the BAD of every series.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use badlands::experiment::{
    compute_bads, points_to_csv, run_sweep, BadCrossing, DefectAxis, NoiseAxis, SweepConfig,
    SweepPoint, SweepSummary, DEFAULT_EPSILON_THR, DEFAULT_ROUNDS,
};
use badlands::lattice::{build_lattice, LocationSpec};
use badlands::noise::{apply_defects, heterogeneous_profile, homogeneous_profile};
use badlands::plot::{emit_curves, emit_heatmap, CurveSpec};

use crate::commands::CaseArgs;

/// All distances reported in the case studies.
pub const CASE_DISTANCES: [u32; 8] = [3, 5, 7, 9, 11, 13, 15, 17];

/// Defect rates: five even steps across 0.05 ..= 0.75.
pub const CASE_P_DEFS: [f64; 5] = [0.05, 0.225, 0.4, 0.575, 0.75];

/// Heterogeneous deviations: five even steps across 0.006 ..= 0.015.
pub const CASE_P_SIGMAS: [f64; 5] = [0.006, 0.00825, 0.0105, 0.01275, 0.015];

/// Nine log-spaced physical rates spanning 5e-4 ..= 1e-2.
pub fn noise_grid() -> Vec<f64> {
    let (lo, hi) = (5e-4f64, 1e-2f64);
    (0..9)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / 8.0).exp())
        .collect()
}

/// Build the sweep configuration of one case preset.
pub fn case_config(number: u8, args: &CaseArgs) -> Result<SweepConfig> {
    let distances = if args.distances.is_empty() {
        CASE_DISTANCES.to_vec()
    } else {
        args.distances.clone()
    };
    let center_defect = DefectAxis {
        location: "center data".into(),
        p_defs: CASE_P_DEFS.to_vec(),
    };
    let (noise, defects) = match number {
        1 => (
            NoiseAxis::Homogeneous { ps: noise_grid() },
            vec![],
        ),
        2 => (
            NoiseAxis::Homogeneous { ps: noise_grid() },
            vec![center_defect],
        ),
        3 => (
            NoiseAxis::Heterogeneous {
                p_mus: noise_grid(),
                p_sigmas: std::iter::once(0.0).chain(CASE_P_SIGMAS).collect(),
                draws: args.draws,
            },
            vec![],
        ),
        4 => (
            NoiseAxis::Heterogeneous {
                p_mus: noise_grid(),
                p_sigmas: vec![0.006],
                draws: args.draws,
            },
            vec![center_defect],
        ),
        n => bail!("unknown case {n}; the presets are 1-4"),
    };
    Ok(SweepConfig {
        distances,
        noise,
        defects,
        rounds: DEFAULT_ROUNDS,
        shots: args.shots,
        epsilon_thr: DEFAULT_EPSILON_THR,
        seed: args.seed,
    })
}

pub fn run_case(args: CaseArgs) -> Result<()> {
    let number = args.number;
    let config = case_config(number, &args)?;
    let points = run_sweep(&config)?;
    let boundaries = compute_bads(&points, config.epsilon_thr)?;

    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let base = |name: &str| args.out_dir.join(format!("case{number}_{name}"));

    fs::write(base("results.csv"), points_to_csv(&points))?;
    let summary = SweepSummary {
        epsilon_thr: config.epsilon_thr,
        boundaries: boundaries.clone(),
    };
    fs::write(base("bads.json"), summary.to_json())?;

    emit_case_curves(number, &points, &summary, &args.out_dir)?;
    emit_case_heatmap(number, &args, &args.out_dir)?;

    for b in &boundaries {
        let series = match &b.defect {
            Some(def) => format!(" p_def={}", def.p_def),
            None if b.p_sigma > 0.0 => format!(" sigma={}", b.p_sigma),
            None => String::new(),
        };
        match &b.crossing {
            BadCrossing::Crossed { value, .. } => {
                println!("case {number}: d={}{} BAD at {} = {value:.6}", b.d, series, b.axis)
            }
            BadCrossing::NotCrossed { range } => println!(
                "case {number}: d={}{} no crossing in [{}, {}]",
                b.d, series, range.0, range.1
            ),
        }
    }
    println!("outputs in {}", args.out_dir.display());
    Ok(())
}

fn emit_case_curves(
    number: u8,
    points: &[SweepPoint],
    summary: &SweepSummary,
    out_dir: &Path,
) -> Result<()> {
    let x_label = match number {
        1 | 2 => "physical error rate p",
        _ => "mean physical error rate p_mu",
    };
    if number == 1 {
        // One figure, one series per distance.
        let spec = CurveSpec {
            title: "case 1: homogeneous noise".into(),
            x_label: x_label.into(),
            ..CurveSpec::default()
        };
        let path = out_dir.join("case1_curves.svg");
        emit_curves(points, &summary.boundaries, &spec, &path)?;
        return Ok(());
    }
    // One figure per distance, series over p_def or sigma.
    let distances: Vec<u32> = {
        let mut ds: Vec<u32> = points.iter().map(|p| p.d).collect();
        ds.dedup();
        ds.sort_unstable();
        ds.dedup();
        ds
    };
    for d in distances {
        let subset: Vec<SweepPoint> = points.iter().filter(|p| p.d == d).cloned().collect();
        let bads: Vec<_> = summary
            .boundaries
            .iter()
            .filter(|b| b.d == d)
            .cloned()
            .collect();
        let title = match number {
            2 => format!("case 2: homogeneous + center data defect, d={d}"),
            3 => format!("case 3: heterogeneous noise, d={d}"),
            _ => format!("case 4: heterogeneous + center data defect, d={d}"),
        };
        let spec = CurveSpec {
            title,
            x_label: x_label.into(),
            ..CurveSpec::default()
        };
        let path = out_dir.join(format!("case{number}_curves_d{d}.svg"));
        emit_curves(&subset, &bads, &spec, &path)?;
    }
    Ok(())
}

/// A representative d=5 heatmap for each case.
fn emit_case_heatmap(number: u8, args: &CaseArgs, out_dir: &Path) -> Result<()> {
    let lattice = build_lattice(5)?;
    let center = LocationSpec::Keyword("center data".into());
    let (profile, title) = match number {
        1 => (
            homogeneous_profile(&lattice, 0.001)?,
            "case 1: homogeneous p=0.001, d=5".to_string(),
        ),
        2 => (
            apply_defects(
                &homogeneous_profile(&lattice, 0.001)?,
                &lattice,
                &[(center, 0.05)],
            )?,
            "case 2: homogeneous p=0.001 + center defect p_def=0.05, d=5".to_string(),
        ),
        3 => (
            heterogeneous_profile(&lattice, 0.003, 0.006, args.seed)?,
            "case 3: heterogeneous p_mu=0.003 sigma=0.006, d=5".to_string(),
        ),
        _ => (
            apply_defects(
                &heterogeneous_profile(&lattice, 0.003, 0.006, args.seed)?,
                &lattice,
                &[(center, 0.05)],
            )?,
            "case 4: heterogeneous sigma=0.006 + center defect, d=5".to_string(),
        ),
    };
    let path = out_dir.join(format!("case{number}_heatmap_d5.svg"));
    emit_heatmap(&profile, &lattice, &title, &path)?;
    Ok(())
}
