//! Per-qubit physical error rates.
//!
//! A [`NoiseProfile`] assigns every qubit of a lattice an individual rate
//! `p_i`, either uniformly (homogeneous) or drawn from a truncated normal
//! distribution (heterogeneous), optionally overlaid with defects that pin
//! specific qubits to a chosen `p_def`. Two-qubit channels combine the two
//! endpoint rates through [`two_qubit_rate`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Coord, Lattice, LocationSpec};

/// Default scaling factor applied to the mean of two qubit rates on
/// two-qubit gates: a 20% penalty over single-qubit operations.
pub const DEFAULT_TWO_QUBIT_SCALE: f64 = 1.2;

/// How a profile's base rates were produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseNoise {
    Homogeneous { p: f64 },
    Heterogeneous { p_mu: f64, p_sigma: f64, seed: u64 },
}

/// A defect overlay entry: the resolved coordinate and its pinned rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectEntry {
    #[serde(flatten)]
    pub coord: Coord,
    pub p_def: f64,
}

/// Full provenance of a profile: base distribution plus defect overlays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub base: BaseNoise,
    pub defects: Vec<DefectEntry>,
}

/// Per-qubit physical error rates for one lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseProfile {
    d: u32,
    rates: Vec<f64>,
    two_qubit_scale: f64,
    provenance: Provenance,
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || value.is_nan() {
        return Err(Error::InvalidProbability { name, value });
    }
    Ok(())
}

/// Uniform profile: every qubit gets exactly `p`.
pub fn homogeneous_profile(lattice: &Lattice, p: f64) -> Result<NoiseProfile> {
    check_probability("p", p)?;
    Ok(NoiseProfile {
        d: lattice.distance(),
        rates: vec![p; lattice.num_qubits() as usize],
        two_qubit_scale: DEFAULT_TWO_QUBIT_SCALE,
        provenance: Provenance {
            base: BaseNoise::Homogeneous { p },
            defects: Vec::new(),
        },
    })
}

/// Heterogeneous profile: each qubit's rate is drawn independently from
/// `Normal(p_mu, p_sigma)` truncated to `[0, 1]` by rejection resampling.
///
/// Draws are keyed by `(seed, qubit index)` so the result is independent of
/// iteration order and identical across thread counts.
pub fn heterogeneous_profile(
    lattice: &Lattice,
    p_mu: f64,
    p_sigma: f64,
    seed: u64,
) -> Result<NoiseProfile> {
    check_probability("p_mu", p_mu)?;
    if p_sigma.is_nan() || p_sigma < 0.0 {
        return Err(Error::InvalidProbability {
            name: "p_sigma",
            value: p_sigma,
        });
    }
    let rates = (0..lattice.num_qubits())
        .map(|i| truncated_normal_draw(p_mu, p_sigma, seed, i))
        .collect();
    Ok(NoiseProfile {
        d: lattice.distance(),
        rates,
        two_qubit_scale: DEFAULT_TWO_QUBIT_SCALE,
        provenance: Provenance {
            base: BaseNoise::Heterogeneous {
                p_mu,
                p_sigma,
                seed,
            },
            defects: Vec::new(),
        },
    })
}

/// One truncated-normal draw on `[0, 1]`, keyed by `(seed, qubit_index)`.
fn truncated_normal_draw(p_mu: f64, p_sigma: f64, seed: u64, qubit_index: u32) -> f64 {
    if p_sigma == 0.0 {
        return p_mu;
    }
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..12].copy_from_slice(&qubit_index.to_le_bytes());
    key[12..20].copy_from_slice(b"qubitrng");
    let mut rng = ChaCha8Rng::from_seed(key);
    let normal = Normal::new(p_mu, p_sigma).expect("sigma checked finite and positive");
    loop {
        let x = normal.sample(&mut rng);
        if (0.0..=1.0).contains(&x) {
            return x;
        }
    }
}

/// Overlay defects on a profile: each resolved location's rate is replaced
/// (not added to) by its `p_def`. Duplicate locations are rejected.
pub fn apply_defects(
    profile: &NoiseProfile,
    lattice: &Lattice,
    defects: &[(LocationSpec, f64)],
) -> Result<NoiseProfile> {
    if profile.d != lattice.distance() {
        return Err(Error::ProfileMismatch {
            profile_d: profile.d,
            lattice_d: lattice.distance(),
        });
    }
    let mut out = profile.clone();
    let mut seen: Vec<Coord> = Vec::new();
    for (spec, p_def) in defects {
        check_probability("p_def", *p_def)?;
        let coord = lattice.resolve_location(spec)?;
        if seen.contains(&coord) {
            return Err(Error::DuplicateDefect(coord.to_string()));
        }
        seen.push(coord);
        let index = lattice.coord_to_index(coord)?;
        out.rates[index as usize] = *p_def;
        out.provenance.defects.push(DefectEntry {
            coord,
            p_def: *p_def,
        });
    }
    Ok(out)
}

/// Combined error rate for a two-qubit gate: the mean of the endpoint rates
/// scaled by `s`, clamped into `[0, 1]`.
///
/// Panics if a rate lies outside `[0, 1]` or `s < 1`; those are caller
/// contract violations, not runtime conditions.
pub fn two_qubit_rate(p_q1: f64, p_q2: f64, s: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p_q1), "p_q1 out of range: {p_q1}");
    assert!((0.0..=1.0).contains(&p_q2), "p_q2 out of range: {p_q2}");
    assert!(s >= 1.0, "scale below 1: {s}");
    ((p_q1 + p_q2) / 2.0 * s).min(1.0)
}

impl NoiseProfile {
    pub fn distance(&self) -> u32 {
        self.d
    }

    /// Rate of the qubit with the given index.
    pub fn rate(&self, index: u32) -> f64 {
        self.rates[index as usize]
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn two_qubit_scale(&self) -> f64 {
        self.two_qubit_scale
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Combined rate for a gate on the two given qubit indices.
    pub fn pair_rate(&self, a: u32, b: u32) -> f64 {
        two_qubit_rate(self.rate(a), self.rate(b), self.two_qubit_scale)
    }

    /// Serialize to the profile JSON document:
    /// `{d, s, rates: [{x, y, p}], provenance}`.
    pub fn to_json(&self) -> String {
        let lattice = Lattice::new(self.d).expect("profile distance already validated");
        let doc = ProfileDoc {
            d: self.d,
            s: self.two_qubit_scale,
            rates: lattice
                .qubits()
                .iter()
                .map(|q| RateEntry {
                    x: q.coord.x(),
                    y: q.coord.y(),
                    p: self.rates[q.index as usize],
                })
                .collect(),
            provenance: self.provenance.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("profile serialization");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<NoiseProfile> {
        let doc: ProfileDoc = serde_json::from_str(text)?;
        let lattice = Lattice::new(doc.d)?;
        if doc.rates.len() != lattice.num_qubits() as usize {
            return Err(Error::InvalidConfig(format!(
                "profile has {} rates, distance {} needs {}",
                doc.rates.len(),
                doc.d,
                lattice.num_qubits()
            )));
        }
        if doc.s < 1.0 {
            return Err(Error::InvalidScale(doc.s));
        }
        let mut rates = vec![f64::NAN; lattice.num_qubits() as usize];
        for entry in &doc.rates {
            check_probability("p", entry.p)?;
            let index = lattice.coord_to_index(Coord::new(entry.x, entry.y)?)?;
            rates[index as usize] = entry.p;
        }
        if rates.iter().any(|p| p.is_nan()) {
            return Err(Error::InvalidConfig(
                "profile does not cover every qubit exactly once".into(),
            ));
        }
        Ok(NoiseProfile {
            d: doc.d,
            rates,
            two_qubit_scale: doc.s,
            provenance: doc.provenance,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ProfileDoc {
    d: u32,
    s: f64,
    rates: Vec<RateEntry>,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct RateEntry {
    x: f64,
    y: f64,
    p: f64,
}
