//! Sweep orchestration: grids over (distance, noise parameter), per-point
//! logical error rates with Wilson confidence intervals, Boundaries of
//! Acceptable Defectiveness (threshold crossings), and the exponential
//! scaling fit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::build_memory_circuit;
use crate::dem::{build_matching_graph, extract_dem};
use crate::error::{Error, Result};
use crate::lattice::{build_lattice, LocationSpec};
use crate::matcher::decode_batch;
use crate::noise::{apply_defects, heterogeneous_profile, homogeneous_profile};
use crate::sampler::sample;

/// Target logical threshold used throughout the case studies.
pub const DEFAULT_EPSILON_THR: f64 = 0.0057;

/// Default stabilizer rounds per memory circuit.
pub const DEFAULT_ROUNDS: u32 = 3;

/// z-score for the 95% Wilson interval.
const WILSON_Z: f64 = 1.959963984540054;

/// Noise axis of a sweep: a list of homogeneous `p` values, or a list of
/// `p_mu` values crossed with `p_sigma` values and repeated over fresh
/// random profile draws.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseAxis {
    Homogeneous {
        ps: Vec<f64>,
    },
    Heterogeneous {
        p_mus: Vec<f64>,
        p_sigmas: Vec<f64>,
        #[serde(default = "default_draws")]
        draws: u32,
    },
}

fn default_draws() -> u32 {
    5
}

/// A defect sweep axis: one location crossed with a list of `p_def` values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefectAxis {
    pub location: String,
    pub p_defs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub distances: Vec<u32>,
    pub noise: NoiseAxis,
    /// Defect axes; the grid always includes the defect-free baseline.
    #[serde(default)]
    pub defects: Vec<DefectAxis>,
    #[serde(default = "default_rounds")]
    pub rounds: u32,
    pub shots: u64,
    #[serde(default = "default_thr")]
    pub epsilon_thr: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_rounds() -> u32 {
    DEFAULT_ROUNDS
}

fn default_thr() -> f64 {
    DEFAULT_EPSILON_THR
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<SweepConfig> {
        let config: SweepConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serialization")
    }

    pub fn validate(&self) -> Result<()> {
        if self.distances.is_empty() {
            return Err(Error::InvalidConfig("no distances".into()));
        }
        for &d in &self.distances {
            if d < 3 || d % 2 == 0 {
                return Err(Error::InvalidDistance(d));
            }
        }
        if self.shots < 1 {
            return Err(Error::InvalidConfig("shots must be >= 1".into()));
        }
        if !(self.epsilon_thr > 0.0 && self.epsilon_thr < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon_thr must lie in (0, 1), got {}",
                self.epsilon_thr
            )));
        }
        if self.rounds < 1 {
            return Err(Error::InvalidRounds(self.rounds));
        }
        let check = |name: &'static str, v: f64| -> Result<()> {
            if !(0.0..=1.0).contains(&v) || v.is_nan() {
                return Err(Error::InvalidProbability { name, value: v });
            }
            Ok(())
        };
        match &self.noise {
            NoiseAxis::Homogeneous { ps } => {
                if ps.is_empty() {
                    return Err(Error::InvalidConfig("empty p axis".into()));
                }
                for &p in ps {
                    check("p", p)?;
                }
            }
            NoiseAxis::Heterogeneous {
                p_mus,
                p_sigmas,
                draws,
            } => {
                if p_mus.is_empty() || p_sigmas.is_empty() {
                    return Err(Error::InvalidConfig("empty p_mu or p_sigma axis".into()));
                }
                if *draws < 1 {
                    return Err(Error::InvalidConfig("draws must be >= 1".into()));
                }
                for &p in p_mus {
                    check("p_mu", p)?;
                }
                for &s in p_sigmas {
                    if s.is_nan() || s < 0.0 {
                        return Err(Error::InvalidProbability {
                            name: "p_sigma",
                            value: s,
                        });
                    }
                }
            }
        }
        for axis in &self.defects {
            LocationSpec::parse(&axis.location)?;
            for &p in &axis.p_defs {
                check("p_def", p)?;
            }
        }
        Ok(())
    }
}

/// Noise descriptor of one sweep point. `draw` is the heterogeneous
/// repetition index; `POOLED_DRAW` marks the pooled aggregate row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointNoise {
    Homogeneous { p: f64 },
    Heterogeneous { p_mu: f64, p_sigma: f64, draw: i64 },
}

pub const POOLED_DRAW: i64 = -1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDefect {
    pub location: String,
    pub p_def: f64,
}

/// One simulated grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub d: u32,
    pub noise: PointNoise,
    pub defect: Option<PointDefect>,
    pub shots: u64,
    pub rounds: u32,
    pub errors: u64,
    pub eps_round: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
}

impl SweepPoint {
    /// The swept noise value: `p` for homogeneous, `p_mu` otherwise.
    pub fn noise_value(&self) -> f64 {
        match &self.noise {
            PointNoise::Homogeneous { p } => *p,
            PointNoise::Heterogeneous { p_mu, .. } => *p_mu,
        }
    }

    pub fn p_sigma(&self) -> f64 {
        match &self.noise {
            PointNoise::Homogeneous { .. } => 0.0,
            PointNoise::Heterogeneous { p_sigma, .. } => *p_sigma,
        }
    }

    pub fn draw(&self) -> i64 {
        match &self.noise {
            PointNoise::Homogeneous { .. } => 0,
            PointNoise::Heterogeneous { draw, .. } => *draw,
        }
    }

    /// Key identifying this point's curve: (d, p_sigma bits, defect).
    fn series_key(&self) -> (u32, u64, Option<(String, u64)>) {
        (
            self.d,
            self.p_sigma().to_bits(),
            self.defect
                .as_ref()
                .map(|def| (def.location.clone(), def.p_def.to_bits())),
        )
    }
}

/// Wilson 95% interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = WILSON_Z;
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Derive an independent stream seed from the base seed and two indices.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    splitmix64(base ^ splitmix64(stream ^ splitmix64(index)))
}

struct GridPoint {
    d: u32,
    noise: PointNoise,
    defect: Option<PointDefect>,
    index: u64,
}

fn enumerate_grid(config: &SweepConfig) -> Vec<GridPoint> {
    let mut grid = Vec::new();
    let mut index = 0u64;
    let defect_options: Vec<Option<PointDefect>> = std::iter::once(None)
        .chain(config.defects.iter().flat_map(|axis| {
            axis.p_defs.iter().map(|&p_def| {
                Some(PointDefect {
                    location: axis.location.clone(),
                    p_def,
                })
            })
        }))
        .collect();
    for &d in &config.distances {
        match &config.noise {
            NoiseAxis::Homogeneous { ps } => {
                for defect in &defect_options {
                    for &p in ps {
                        grid.push(GridPoint {
                            d,
                            noise: PointNoise::Homogeneous { p },
                            defect: defect.clone(),
                            index,
                        });
                        index += 1;
                    }
                }
            }
            NoiseAxis::Heterogeneous {
                p_mus,
                p_sigmas,
                draws,
            } => {
                for &p_sigma in p_sigmas {
                    for defect in &defect_options {
                        for &p_mu in p_mus {
                            for draw in 0..*draws {
                                grid.push(GridPoint {
                                    d,
                                    noise: PointNoise::Heterogeneous {
                                        p_mu,
                                        p_sigma,
                                        draw: draw as i64,
                                    },
                                    defect: defect.clone(),
                                    index,
                                });
                                index += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    grid
}

/// Simulate one grid point end to end.
fn run_point(config: &SweepConfig, point: &GridPoint) -> Result<SweepPoint> {
    let lattice = build_lattice(point.d)?;
    let profile_seed = derive_seed(config.seed, 1, point.index);
    let sample_seed = derive_seed(config.seed, 2, point.index);
    let base = match &point.noise {
        PointNoise::Homogeneous { p } => homogeneous_profile(&lattice, *p)?,
        PointNoise::Heterogeneous {
            p_mu, p_sigma, ..
        } => heterogeneous_profile(&lattice, *p_mu, *p_sigma, profile_seed)?,
    };
    let profile = match &point.defect {
        Some(def) => apply_defects(
            &base,
            &lattice,
            &[(LocationSpec::parse(&def.location)?, def.p_def)],
        )?,
        None => base,
    };
    let circuit = build_memory_circuit(&lattice, &profile, config.rounds)?;
    let graph = build_matching_graph(&extract_dem(&circuit)?);
    let samples = sample(&circuit, config.shots, sample_seed)?;
    let (errors, shots) = decode_batch(&graph, &samples)?;
    let trials = shots * config.rounds as u64;
    let eps_round = errors as f64 / trials as f64;
    let (ci_lo, ci_hi) = wilson_interval(errors, trials);
    Ok(SweepPoint {
        d: point.d,
        noise: point.noise.clone(),
        defect: point.defect.clone(),
        shots,
        rounds: config.rounds,
        errors,
        eps_round,
        ci_lo,
        ci_hi,
        seed: sample_seed,
    })
}

/// Run the full grid. Heterogeneous draw groups additionally emit one
/// pooled point (draw = [`POOLED_DRAW`]) right after their individual
/// draws. Deterministic given the config, independent of thread count.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepPoint>> {
    config.validate()?;
    let grid = enumerate_grid(config);
    let points: Vec<SweepPoint> = grid
        .par_iter()
        .map(|gp| {
            run_point(config, gp).map_err(|e| {
                Error::InvalidConfig(format!(
                    "grid point {} (d={}, noise={:?}) failed: {e}",
                    gp.index, gp.d, gp.noise
                ))
            })
        })
        .collect::<Result<_>>()?;

    // Insert pooled aggregates after each heterogeneous draw group; the
    // grid enumerates draws consecutively.
    let mut out: Vec<SweepPoint> = Vec::with_capacity(points.len());
    let mut group: Vec<SweepPoint> = Vec::new();
    for p in points {
        let starts_new_group = group.last().is_some_and(|prev: &SweepPoint| {
            prev.series_key() != p.series_key() || prev.noise_value() != p.noise_value()
        });
        if starts_new_group {
            flush_group(&mut out, &mut group, config);
        }
        group.push(p);
    }
    flush_group(&mut out, &mut group, config);
    Ok(out)
}

fn flush_group(out: &mut Vec<SweepPoint>, group: &mut Vec<SweepPoint>, config: &SweepConfig) {
    if group.is_empty() {
        return;
    }
    let pooled = pool_draws(group, config.seed);
    out.append(group);
    if let Some(p) = pooled {
        out.push(p);
    }
}

/// Pool a group of heterogeneous draws into one aggregate point.
fn pool_draws(group: &[SweepPoint], seed: u64) -> Option<SweepPoint> {
    if group.len() < 2 {
        return None;
    }
    let first = &group[0];
    let (p_mu, p_sigma) = match &first.noise {
        PointNoise::Heterogeneous { p_mu, p_sigma, .. } => (*p_mu, *p_sigma),
        PointNoise::Homogeneous { .. } => return None,
    };
    let errors: u64 = group.iter().map(|p| p.errors).sum();
    let shots: u64 = group.iter().map(|p| p.shots).sum();
    let trials = shots * first.rounds as u64;
    let (ci_lo, ci_hi) = wilson_interval(errors, trials);
    Some(SweepPoint {
        d: first.d,
        noise: PointNoise::Heterogeneous {
            p_mu,
            p_sigma,
            draw: POOLED_DRAW,
        },
        defect: first.defect.clone(),
        shots,
        rounds: first.rounds,
        errors,
        eps_round: errors as f64 / trials as f64,
        ci_lo,
        ci_hi,
        seed,
    })
}

/// Whether a BAD crossing was found, and where.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum BadCrossing {
    Crossed {
        value: f64,
        /// The two bracketing (noise, eps_round) samples.
        bracket: [(f64, f64); 2],
    },
    NotCrossed {
        range: (f64, f64),
    },
}

/// The Boundary of Acceptable Defectiveness of one performance curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BadBoundary {
    pub d: u32,
    /// Swept axis name: "p" or "p_mu".
    pub axis: String,
    pub p_sigma: f64,
    pub defect: Option<PointDefect>,
    pub epsilon_thr: f64,
    pub crossing: BadCrossing,
}

/// Locate the threshold crossing of one curve (points for a single d and
/// series, any order). Interpolates linearly in (log noise, log eps) space;
/// under non-monotone data the first crossing in noise order wins.
pub fn compute_bad(points: &[SweepPoint], epsilon_thr: f64) -> Result<BadBoundary> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let d = points[0].d;
    if points.iter().any(|p| p.d != d) {
        return Err(Error::InvalidConfig(
            "BAD computation mixes distances".into(),
        ));
    }
    let mut sorted: Vec<&SweepPoint> = points.iter().collect();
    sorted.sort_by(|a, b| a.noise_value().total_cmp(&b.noise_value()));
    let axis = match sorted[0].noise {
        PointNoise::Homogeneous { .. } => "p",
        PointNoise::Heterogeneous { .. } => "p_mu",
    };

    // eps = 0 cannot be placed on a log axis; substitute half an error
    // count, the resolution floor of the estimate.
    let floor = |p: &SweepPoint| {
        if p.eps_round > 0.0 {
            p.eps_round
        } else {
            0.5 / (p.shots as f64 * p.rounds as f64)
        }
    };

    let mut crossing = None;
    for pair in sorted.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let bracket = [
            (a.noise_value(), a.eps_round),
            (b.noise_value(), b.eps_round),
        ];
        // A grid point landing exactly on the threshold is the BAD itself.
        if a.eps_round == epsilon_thr {
            crossing = Some(BadCrossing::Crossed {
                value: a.noise_value(),
                bracket,
            });
            break;
        }
        if b.eps_round == epsilon_thr {
            crossing = Some(BadCrossing::Crossed {
                value: b.noise_value(),
                bracket,
            });
            break;
        }
        let (ea, eb) = (floor(a), floor(b));
        if (ea < epsilon_thr) != (eb < epsilon_thr) {
            let (xa, xb) = (a.noise_value(), b.noise_value());
            let t = (epsilon_thr.ln() - ea.ln()) / (eb.ln() - ea.ln());
            let value = (xa.ln() + t * (xb.ln() - xa.ln())).exp();
            crossing = Some(BadCrossing::Crossed { value, bracket });
            break;
        }
    }
    let last = sorted.last().unwrap();
    Ok(BadBoundary {
        d,
        axis: axis.into(),
        p_sigma: sorted[0].p_sigma(),
        defect: sorted[0].defect.clone(),
        epsilon_thr,
        crossing: crossing.unwrap_or(BadCrossing::NotCrossed {
            range: (sorted[0].noise_value(), last.noise_value()),
        }),
    })
}

/// Compute the BAD of every (d, p_sigma, defect) series in a sweep result.
/// Heterogeneous series use their pooled points.
pub fn compute_bads(points: &[SweepPoint], epsilon_thr: f64) -> Result<Vec<BadBoundary>> {
    let pooled: std::collections::HashSet<(SeriesKey, u64)> = points
        .iter()
        .filter(|p| p.draw() == POOLED_DRAW)
        .map(|p| (p.series_key(), p.noise_value().to_bits()))
        .collect();
    let mut order: Vec<SeriesKey> = Vec::new();
    let mut groups: std::collections::HashMap<SeriesKey, Vec<SweepPoint>> =
        std::collections::HashMap::new();
    for p in points {
        // Individual draws defer to their pooled aggregate.
        if p.draw() != POOLED_DRAW
            && pooled.contains(&(p.series_key(), p.noise_value().to_bits()))
        {
            continue;
        }
        let key = p.series_key();
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(p.clone());
    }
    let mut out = Vec::new();
    for key in order {
        let group = &groups[&key];
        if group.len() >= 2 {
            out.push(compute_bad(group, epsilon_thr)?);
        }
    }
    Ok(out)
}

type SeriesKey = (u32, u64, Option<(String, u64)>);

/// Result of fitting `ln eps = intercept + slope * (d+1)/2` over distances
/// at one fixed homogeneous `p`.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingFit {
    /// Fitted slope, the estimate of `ln(p / p_thr)`.
    pub slope: f64,
    pub intercept: f64,
    /// Threshold implied by the slope: `p / exp(slope)`.
    pub implied_p_thr: f64,
    /// Per-point residuals of ln eps, in input order of the used points.
    pub residuals: Vec<f64>,
    /// (d, eps_round) pairs actually used.
    pub used: Vec<(u32, f64)>,
}

/// Least-squares fit of the exponential suppression relation across code
/// distances. Points must share one homogeneous `p`; zero-error points are
/// excluded with a warning.
pub fn fit_scaling(points: &[SweepPoint]) -> Result<ScalingFit> {
    let mut p_common: Option<f64> = None;
    let mut used: Vec<(u32, f64)> = Vec::new();
    for point in points {
        let p = match &point.noise {
            PointNoise::Homogeneous { p } => *p,
            PointNoise::Heterogeneous { .. } => {
                return Err(Error::InvalidConfig(
                    "scaling fit needs homogeneous points".into(),
                ))
            }
        };
        match p_common {
            None => p_common = Some(p),
            Some(q) if q == p => {}
            Some(q) => {
                return Err(Error::InvalidConfig(format!(
                    "scaling fit mixes p = {q} and p = {p}"
                )))
            }
        }
        if point.eps_round == 0.0 {
            log::warn!("excluding zero-error point d={} from scaling fit", point.d);
            continue;
        }
        used.push((point.d, point.eps_round));
    }
    let distinct: std::collections::BTreeSet<u32> = used.iter().map(|(d, _)| *d).collect();
    if distinct.len() < 3 {
        return Err(Error::TooFewFitPoints(distinct.len()));
    }
    let p = p_common.expect("nonempty by distinct check");
    let xs: Vec<f64> = used.iter().map(|(d, _)| f64::from(d + 1) / 2.0).collect();
    let ys: Vec<f64> = used.iter().map(|(_, e)| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| y - (intercept + slope * x))
        .collect();
    Ok(ScalingFit {
        slope,
        intercept,
        implied_p_thr: p / slope.exp(),
        residuals,
        used,
    })
}

/// Fixed CSV column order for sweep results.
pub const CSV_HEADER: &str =
    "d,noise_kind,p_or_pmu,p_sigma,defect_loc,p_def,draw_id,shots,rounds,errors,eps_round,ci_lo,ci_hi,seed";

/// Render sweep points as CSV with the fixed column order.
pub fn points_to_csv(points: &[SweepPoint]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(',')).expect("csv header");
    for p in points {
        let kind = match p.noise {
            PointNoise::Homogeneous { .. } => "homogeneous",
            PointNoise::Heterogeneous { .. } => "heterogeneous",
        };
        let (loc, p_def) = match &p.defect {
            Some(def) => (def.location.clone(), format!("{}", def.p_def)),
            None => (String::new(), String::new()),
        };
        w.write_record([
            p.d.to_string(),
            kind.to_string(),
            format!("{}", p.noise_value()),
            format!("{}", p.p_sigma()),
            loc,
            p_def,
            p.draw().to_string(),
            p.shots.to_string(),
            p.rounds.to_string(),
            p.errors.to_string(),
            format!("{}", p.eps_round),
            format!("{}", p.ci_lo),
            format!("{}", p.ci_hi),
            p.seed.to_string(),
        ])
        .expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
}

/// Parse sweep points back from the CSV form.
pub fn points_from_csv(text: &str) -> Result<Vec<SweepPoint>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    {
        let got = r.headers()?.iter().collect::<Vec<_>>().join(",");
        if got != CSV_HEADER {
            return Err(Error::InvalidConfig(format!(
                "unexpected CSV header: {got}"
            )));
        }
    }
    let mut out = Vec::new();
    for record in r.records() {
        let rec = record?;
        let get = |i: usize| rec.get(i).unwrap_or("").to_string();
        let parse_f = |i: usize, name: &str| -> Result<f64> {
            get(i)
                .parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("bad {name} in CSV: {:?}", get(i))))
        };
        let parse_u = |i: usize, name: &str| -> Result<u64> {
            get(i)
                .parse::<u64>()
                .map_err(|_| Error::InvalidConfig(format!("bad {name} in CSV: {:?}", get(i))))
        };
        let d = parse_u(0, "d")? as u32;
        let noise = match get(1).as_str() {
            "homogeneous" => PointNoise::Homogeneous {
                p: parse_f(2, "p")?,
            },
            "heterogeneous" => PointNoise::Heterogeneous {
                p_mu: parse_f(2, "p_mu")?,
                p_sigma: parse_f(3, "p_sigma")?,
                draw: get(6)
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidConfig("bad draw_id in CSV".into()))?,
            },
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown noise_kind {other:?} in CSV"
                )))
            }
        };
        let defect = if get(4).is_empty() {
            None
        } else {
            Some(PointDefect {
                location: get(4),
                p_def: parse_f(5, "p_def")?,
            })
        };
        out.push(SweepPoint {
            d,
            noise,
            defect,
            shots: parse_u(7, "shots")?,
            rounds: parse_u(8, "rounds")? as u32,
            errors: parse_u(9, "errors")?,
            eps_round: parse_f(10, "eps_round")?,
            ci_lo: parse_f(11, "ci_lo")?,
            ci_hi: parse_f(12, "ci_hi")?,
            seed: parse_u(13, "seed")?,
        });
    }
    Ok(out)
}

/// JSON summary document holding the BAD of every series.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSummary {
    pub epsilon_thr: f64,
    pub boundaries: Vec<BadBoundary>,
}

impl SweepSummary {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serialization");
        s.push('\n');
        s
    }
}
