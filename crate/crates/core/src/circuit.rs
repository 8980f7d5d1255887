//! Noisy stabilizer memory circuits.
//!
//! [`build_memory_circuit`] compiles a lattice and a noise profile into a
//! Z-basis memory experiment: reset everything, run `rounds` stabilizer
//! cycles (two Hadamard layers around four CX steps, then measure+reset of
//! every ancilla), then read out the data qubits and compare. Noise sits
//! immediately before the circuit element it models: `X_ERROR` on state
//! preparation and measurement, `DEPOLARIZE1` on Hadamards, `DEPOLARIZE2`
//! with the pair-combined rate on every CX.

use crate::error::{Error, Result};
use crate::lattice::{Coord, Lattice, QubitKind};
use crate::noise::NoiseProfile;

/// Default number of stabilizer rounds in generated memory circuits.
pub const DEFAULT_ROUNDS: u32 = 3;

/// One circuit instruction. Gates hold single targets (pairs for the
/// two-qubit forms); the text format may coalesce consecutive instructions
/// of the same kind onto one line.
#[derive(Clone, Debug, PartialEq)]
pub enum Instruction {
    QubitCoords { qubit: u32, x: f64, y: f64 },
    Reset { q: u32 },
    Hadamard { q: u32 },
    ControlledX { control: u32, target: u32 },
    Measure { q: u32 },
    MeasureReset { q: u32 },
    XError { p: f64, q: u32 },
    Depolarize1 { p: f64, q: u32 },
    Depolarize2 { p: f64, a: u32, b: u32 },
    Tick,
    /// Backwards offsets into the measurement record (`rec[-k]` with k >= 1)
    /// plus an optional `(x, y, t)` coordinate tag.
    Detector {
        coord: Option<[f64; 3]>,
        offsets: Vec<u32>,
    },
    ObservableInclude { id: u32, offsets: Vec<u32> },
}

impl Instruction {
    /// Number of elementary fault components this instruction can host:
    /// 1 for X_ERROR, 3 for DEPOLARIZE1, 15 for DEPOLARIZE2, 0 otherwise.
    pub fn noise_component_count(&self) -> usize {
        match self {
            Instruction::XError { .. } => 1,
            Instruction::Depolarize1 { .. } => 3,
            Instruction::Depolarize2 { .. } => 15,
            _ => 0,
        }
    }

    pub fn noise_probability(&self) -> Option<f64> {
        match self {
            Instruction::XError { p, .. }
            | Instruction::Depolarize1 { p, .. }
            | Instruction::Depolarize2 { p, .. } => Some(*p),
            _ => None,
        }
    }

    fn measurement_count(&self) -> u32 {
        matches!(self, Instruction::Measure { .. } | Instruction::MeasureReset { .. }) as u32
    }
}

/// Memory basis; only Z-memory circuits are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Basis {
    #[default]
    ZMemory,
}

/// An ordered noisy stabilizer circuit with detector and observable
/// annotations. `d`/`rounds` are present on circuits built by
/// [`build_memory_circuit`] and inferred (when consistent) after parsing.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub d: Option<u32>,
    pub rounds: Option<u32>,
    pub basis: Basis,
    pub instructions: Vec<Instruction>,
    num_qubits: u32,
    num_measurements: u32,
    num_detectors: u32,
    num_observables: u32,
}

impl Circuit {
    /// Assemble a circuit from raw instructions, validating targets and
    /// measurement-record references and recomputing all counts.
    pub fn from_instructions(instructions: Vec<Instruction>) -> Result<Circuit> {
        let mut num_qubits = 0u32;
        let mut meas = 0u32;
        let mut detectors = 0u32;
        let mut max_obs: Option<u32> = None;
        for (idx, ins) in instructions.iter().enumerate() {
            let mut touch = |q: u32| {
                num_qubits = num_qubits.max(q + 1);
            };
            match ins {
                Instruction::QubitCoords { qubit, .. } => touch(*qubit),
                Instruction::Reset { q }
                | Instruction::Hadamard { q }
                | Instruction::Measure { q }
                | Instruction::MeasureReset { q } => touch(*q),
                Instruction::ControlledX { control, target } => {
                    if control == target {
                        return Err(Error::InvalidConfig(format!(
                            "instruction {idx}: CX with identical control and target {control}"
                        )));
                    }
                    touch(*control);
                    touch(*target);
                }
                Instruction::XError { p, q } | Instruction::Depolarize1 { p, q } => {
                    check_noise_arg(*p, idx)?;
                    touch(*q);
                }
                Instruction::Depolarize2 { p, a, b } => {
                    check_noise_arg(*p, idx)?;
                    if a == b {
                        return Err(Error::InvalidConfig(format!(
                            "instruction {idx}: DEPOLARIZE2 with identical targets {a}"
                        )));
                    }
                    touch(*a);
                    touch(*b);
                }
                Instruction::Tick => {}
                Instruction::Detector { offsets, .. } => {
                    check_record_refs(offsets, meas, idx)?;
                    detectors += 1;
                }
                Instruction::ObservableInclude { id, offsets } => {
                    check_record_refs(offsets, meas, idx)?;
                    max_obs = Some(max_obs.map_or(*id, |m: u32| m.max(*id)));
                }
            }
            meas += ins.measurement_count();
        }
        let mut circuit = Circuit {
            d: None,
            rounds: None,
            basis: Basis::ZMemory,
            instructions,
            num_qubits,
            num_measurements: meas,
            num_detectors: detectors,
            num_observables: max_obs.map_or(0, |m| m + 1),
        };
        circuit.infer_shape();
        Ok(circuit)
    }

    /// Fill `d`/`rounds` when the structural counts match the memory-circuit
    /// family exactly; leaves them `None` otherwise.
    fn infer_shape(&mut self) {
        let n = self.num_qubits;
        if n < 17 || !(n + 1).is_multiple_of(2) {
            return;
        }
        let d = (n.div_ceil(2) as f64).sqrt().round() as u32;
        if d.is_multiple_of(2) || d < 3 || 2 * d * d - 1 != n {
            return;
        }
        let ancillas = d * d - 1;
        let data = d * d;
        if self.num_measurements < data {
            return;
        }
        let anc_meas = self.num_measurements - data;
        if anc_meas == 0 || !anc_meas.is_multiple_of(ancillas) {
            return;
        }
        let rounds = anc_meas / ancillas;
        if self.num_detectors == ancillas / 2 + (rounds - 1) * ancillas + ancillas / 2 {
            self.d = Some(d);
            self.rounds = Some(rounds);
        }
    }

    pub fn num_qubits(&self) -> u32 {
        self.num_qubits
    }

    pub fn num_measurements(&self) -> u32 {
        self.num_measurements
    }

    pub fn num_detectors(&self) -> u32 {
        self.num_detectors
    }

    pub fn num_observables(&self) -> u32 {
        self.num_observables
    }

    /// Coordinate tags of all detectors, in detector-id order.
    pub fn detector_coords(&self) -> Vec<Option<[f64; 3]>> {
        self.instructions
            .iter()
            .filter_map(|ins| match ins {
                Instruction::Detector { coord, .. } => Some(*coord),
                _ => None,
            })
            .collect()
    }

    /// Every elementary fault location in this circuit, in instruction order.
    pub fn fault_locations(&self) -> Vec<FaultLocation> {
        let mut out = Vec::new();
        for (idx, ins) in self.instructions.iter().enumerate() {
            for component in 0..ins.noise_component_count() {
                out.push(FaultLocation {
                    instruction: idx,
                    component,
                });
            }
        }
        out
    }
}

fn check_noise_arg(p: f64, idx: usize) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidConfig(format!(
            "instruction {idx}: noise argument {p} outside [0, 1]"
        )));
    }
    Ok(())
}

fn check_record_refs(offsets: &[u32], meas_so_far: u32, idx: usize) -> Result<()> {
    for &k in offsets {
        if k == 0 || k > meas_so_far {
            return Err(Error::InvalidConfig(format!(
                "instruction {idx}: rec[-{k}] reaches before the start of the measurement record ({meas_so_far} measurements so far)"
            )));
        }
    }
    Ok(())
}

/// A single Pauli fault inside one noise instruction.
///
/// `component` indexes the instruction's decomposition: X_ERROR has the lone
/// component 0 (an X); DEPOLARIZE1 has 0..3 for X, Y, Z; DEPOLARIZE2 has
/// 0..15 for the fifteen non-identity two-qubit Paulis in (IX, IY, IZ, XI,
/// XX, ...) order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaultLocation {
    pub instruction: usize,
    pub component: usize,
}

/// X/Z bit pair describing a single-qubit Pauli (Y = both).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PauliBits {
    pub x: bool,
    pub z: bool,
}

impl FaultLocation {
    /// Decode this fault into concrete `(qubit, PauliBits)` flips.
    pub fn pauli_flips(&self, circuit: &Circuit) -> Result<Vec<(u32, PauliBits)>> {
        let ins = circuit
            .instructions
            .get(self.instruction)
            .ok_or_else(|| Error::InvalidFault(format!("instruction {} out of range", self.instruction)))?;
        let count = ins.noise_component_count();
        if self.component >= count {
            return Err(Error::InvalidFault(format!(
                "component {} out of range for instruction {:?}",
                self.component, ins
            )));
        }
        let single = |code: usize| PauliBits {
            x: code == 1 || code == 2,
            z: code == 2 || code == 3,
        };
        Ok(match ins {
            Instruction::XError { q, .. } => vec![(*q, PauliBits { x: true, z: false })],
            Instruction::Depolarize1 { q, .. } => vec![(*q, single(self.component + 1))],
            Instruction::Depolarize2 { a, b, .. } => {
                let code = self.component + 1;
                let pa = single(code >> 2);
                let pb = single(code & 3);
                let mut flips = Vec::new();
                if pa.x || pa.z {
                    flips.push((*a, pa));
                }
                if pb.x || pb.z {
                    flips.push((*b, pb));
                }
                flips
            }
            _ => unreachable!("noise_component_count is zero for non-noise instructions"),
        })
    }

    /// Probability of this single component firing.
    pub fn probability(&self, circuit: &Circuit) -> f64 {
        let ins = &circuit.instructions[self.instruction];
        let p = ins.noise_probability().unwrap_or(0.0);
        p / ins.noise_component_count() as f64
    }
}

/// True when a detector coordinate tag belongs to the Z-check family under
/// this crate's checkerboard convention (plaquette parity odd).
pub fn detector_is_z_family(coord: &[f64; 3]) -> bool {
    let i = (coord[0] - 0.5).round() as i64;
    let j = (coord[1] - 0.5).round() as i64;
    (i + j).rem_euclid(2) == 1
}

/// The four-step CX schedule. X-check ancillas visit their data neighbors
/// in NE, NW, SE, SW order and Z-check ancillas in NE, SE, NW, SW order
/// (+y is north); the resulting hook errors stay perpendicular to the
/// logical operator they could otherwise shorten.
fn schedule_offset(kind: QubitKind, step: usize) -> (f64, f64) {
    const X_ORDER: [(f64, f64); 4] = [(0.5, 0.5), (-0.5, 0.5), (0.5, -0.5), (-0.5, -0.5)];
    const Z_ORDER: [(f64, f64); 4] = [(0.5, 0.5), (0.5, -0.5), (-0.5, 0.5), (-0.5, -0.5)];
    match kind {
        QubitKind::MeasureX => X_ORDER[step],
        QubitKind::MeasureZ => Z_ORDER[step],
        QubitKind::Data => unreachable!("data qubits have no schedule"),
    }
}

/// Compile a Z-basis memory experiment over `rounds` stabilizer cycles.
pub fn build_memory_circuit(
    lattice: &Lattice,
    profile: &NoiseProfile,
    rounds: u32,
) -> Result<Circuit> {
    if rounds < 1 {
        return Err(Error::InvalidRounds(rounds));
    }
    if profile.distance() != lattice.distance() {
        return Err(Error::ProfileMismatch {
            profile_d: profile.distance(),
            lattice_d: lattice.distance(),
        });
    }
    let d = lattice.distance();
    let measures: Vec<_> = lattice.measure_qubits().copied().collect();
    let x_measures: Vec<_> = measures
        .iter()
        .filter(|q| q.kind == QubitKind::MeasureX)
        .copied()
        .collect();
    let z_measures: Vec<_> = measures
        .iter()
        .filter(|q| q.kind == QubitKind::MeasureZ)
        .copied()
        .collect();
    let datas: Vec<_> = lattice.data_qubits().copied().collect();
    let p = |q: u32| profile.rate(q);

    let mut ins: Vec<Instruction> = Vec::new();
    for q in lattice.qubits() {
        ins.push(Instruction::QubitCoords {
            qubit: q.index,
            x: q.coord.x(),
            y: q.coord.y(),
        });
    }

    // State preparation with bit-flip noise after each reset.
    for q in lattice.qubits() {
        ins.push(Instruction::Reset { q: q.index });
    }
    for q in lattice.qubits() {
        ins.push(Instruction::XError {
            p: p(q.index),
            q: q.index,
        });
    }
    ins.push(Instruction::Tick);

    let mut total_meas: u32 = 0;
    // Last ancilla measurement index, keyed by qubit index.
    let mut prev_meas: Vec<Option<u32>> = vec![None; lattice.num_qubits() as usize];

    let hadamard_layer = |ins: &mut Vec<Instruction>| {
        for q in &x_measures {
            ins.push(Instruction::Depolarize1 {
                p: p(q.index),
                q: q.index,
            });
        }
        for q in &x_measures {
            ins.push(Instruction::Hadamard { q: q.index });
        }
    };

    for round in 1..=rounds {
        hadamard_layer(&mut ins);
        ins.push(Instruction::Tick);
        for step in 0..4 {
            for m in &measures {
                let (dx, dy) = schedule_offset(m.kind, step);
                let neighbor = m.coord.offset(dx, dy);
                let Ok(data) = lattice.coord_to_index(neighbor) else {
                    continue;
                };
                let (control, target) = match m.kind {
                    QubitKind::MeasureX => (m.index, data),
                    QubitKind::MeasureZ => (data, m.index),
                    QubitKind::Data => unreachable!(),
                };
                ins.push(Instruction::Depolarize2 {
                    p: profile.pair_rate(control, target),
                    a: control,
                    b: target,
                });
                ins.push(Instruction::ControlledX { control, target });
            }
            ins.push(Instruction::Tick);
        }
        hadamard_layer(&mut ins);
        ins.push(Instruction::Tick);

        for m in &measures {
            ins.push(Instruction::XError {
                p: p(m.index),
                q: m.index,
            });
        }
        let mut this_meas: Vec<Option<u32>> = vec![None; lattice.num_qubits() as usize];
        for m in &measures {
            ins.push(Instruction::MeasureReset { q: m.index });
            this_meas[m.index as usize] = Some(total_meas);
            total_meas += 1;
        }
        // Bit-flip noise on the re-preparation half of measure+reset; the
        // ancilla state preparation happens every round, not just at the
        // start.
        for m in &measures {
            ins.push(Instruction::XError {
                p: p(m.index),
                q: m.index,
            });
        }
        if round == 1 {
            // Only the Z checks are deterministic on |0..0>.
            for m in &z_measures {
                let cur = this_meas[m.index as usize].unwrap();
                ins.push(Instruction::Detector {
                    coord: Some([m.coord.x(), m.coord.y(), 0.0]),
                    offsets: vec![total_meas - cur],
                });
            }
        } else {
            for m in &measures {
                let cur = this_meas[m.index as usize].unwrap();
                let prev = prev_meas[m.index as usize].unwrap();
                ins.push(Instruction::Detector {
                    coord: Some([m.coord.x(), m.coord.y(), f64::from(round - 1)]),
                    offsets: vec![total_meas - cur, total_meas - prev],
                });
            }
        }
        prev_meas = this_meas;
        ins.push(Instruction::Tick);
    }

    // Final data readout in the Z basis.
    for q in &datas {
        ins.push(Instruction::XError {
            p: p(q.index),
            q: q.index,
        });
    }
    let mut data_meas: Vec<Option<u32>> = vec![None; lattice.num_qubits() as usize];
    for q in &datas {
        ins.push(Instruction::Measure { q: q.index });
        data_meas[q.index as usize] = Some(total_meas);
        total_meas += 1;
    }
    for m in &z_measures {
        let mut offsets: Vec<u32> = Vec::new();
        for c in lattice.stabilizer_support(m.coord) {
            let q = lattice.coord_to_index(c)?;
            offsets.push(total_meas - data_meas[q as usize].unwrap());
        }
        offsets.sort_unstable();
        offsets.push(total_meas - prev_meas[m.index as usize].unwrap());
        ins.push(Instruction::Detector {
            coord: Some([m.coord.x(), m.coord.y(), f64::from(rounds)]),
            offsets,
        });
    }
    let mut obs_offsets: Vec<u32> = lattice
        .logical_z_row()
        .iter()
        .map(|&c| {
            let q = lattice.coord_to_index(c).expect("row qubit on lattice");
            total_meas - data_meas[q as usize].unwrap()
        })
        .collect();
    obs_offsets.sort_unstable();
    ins.push(Instruction::ObservableInclude {
        id: 0,
        offsets: obs_offsets,
    });

    let mut circuit = Circuit::from_instructions(ins)?;
    circuit.d = Some(d);
    circuit.rounds = Some(rounds);
    let ancillas = d * d - 1;
    debug_assert_eq!(circuit.num_measurements, rounds * ancillas + d * d);
    debug_assert_eq!(
        circuit.num_detectors,
        ancillas / 2 + (rounds - 1) * ancillas + ancillas / 2
    );
    debug_assert_eq!(circuit.num_observables, 1);
    Ok(circuit)
}

/// Coordinates of the data row feeding the logical observable, for tests.
pub fn observable_row(lattice: &Lattice) -> Vec<Coord> {
    lattice.logical_z_row()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;
    use crate::noise::{homogeneous_profile, two_qubit_rate};

    fn circuit(d: u32, p: f64, rounds: u32) -> Circuit {
        let lat = build_lattice(d).unwrap();
        let prof = homogeneous_profile(&lat, p).unwrap();
        build_memory_circuit(&lat, &prof, rounds).unwrap()
    }

    #[test]
    fn d3_r3_counts() {
        let c = circuit(3, 0.001, 3);
        assert_eq!(c.num_measurements(), 33); // 24 ancilla + 9 data
        assert_eq!(c.num_detectors(), 24); // 4 + 2*8 + 4
        assert_eq!(c.num_observables(), 1);
        assert_eq!(c.d, Some(3));
        assert_eq!(c.rounds, Some(3));
    }

    #[test]
    fn rejects_bad_inputs() {
        let lat = build_lattice(3).unwrap();
        let prof = homogeneous_profile(&lat, 0.001).unwrap();
        assert!(build_memory_circuit(&lat, &prof, 0).is_err());
        let lat5 = build_lattice(5).unwrap();
        assert!(build_memory_circuit(&lat5, &prof, 3).is_err());
    }

    #[test]
    fn every_cx_preceded_by_its_depolarize2() {
        let c = circuit(5, 0.003, 2);
        let mut cx_count = 0;
        for (i, ins) in c.instructions.iter().enumerate() {
            if let Instruction::ControlledX { control, target } = ins {
                cx_count += 1;
                match &c.instructions[i - 1] {
                    Instruction::Depolarize2 { p, a, b } => {
                        assert_eq!((a, b), (control, target));
                        assert_eq!(*p, two_qubit_rate(0.003, 0.003, 1.2));
                    }
                    other => panic!("CX at {i} preceded by {other:?}"),
                }
            }
        }
        // 4 * interior + 2 * boundary gates per round, 2 rounds.
        assert_eq!(cx_count, 2 * (4 * 16 + 2 * 8));
    }

    #[test]
    fn defect_rates_reach_every_touching_gate() {
        use crate::lattice::LocationSpec;
        use crate::noise::apply_defects;
        let lat = build_lattice(5).unwrap();
        let base = homogeneous_profile(&lat, 0.001).unwrap();
        let prof = apply_defects(
            &base,
            &lat,
            &[(LocationSpec::Keyword("center data".into()), 0.75)],
        )
        .unwrap();
        let center = lat
            .coord_to_index(Coord::new(3.0, 3.0).unwrap())
            .unwrap();
        let c = build_memory_circuit(&lat, &prof, 3).unwrap();
        let mut touched = 0;
        for ins in &c.instructions {
            match ins {
                Instruction::Depolarize2 { p, a, b } => {
                    if *a == center || *b == center {
                        assert_eq!(*p, two_qubit_rate(0.75, 0.001, 1.2));
                        touched += 1;
                    } else {
                        assert_eq!(*p, two_qubit_rate(0.001, 0.001, 1.2));
                    }
                }
                Instruction::XError { p, q } => {
                    if *q == center {
                        assert_eq!(*p, 0.75);
                    } else {
                        assert_eq!(*p, 0.001);
                    }
                }
                _ => {}
            }
        }
        // The center data qubit touches four checks once per step set, three rounds.
        assert_eq!(touched, 3 * 4);
    }

    #[test]
    fn schedule_has_no_target_collisions_within_a_step() {
        for d in [3u32, 5, 7] {
            let lat = build_lattice(d).unwrap();
            let prof = homogeneous_profile(&lat, 0.001).unwrap();
            let c = build_memory_circuit(&lat, &prof, 1).unwrap();
            let mut in_step: Vec<u32> = Vec::new();
            for ins in &c.instructions {
                match ins {
                    Instruction::ControlledX { control, target } => {
                        assert!(!in_step.contains(control), "collision on {control} at d={d}");
                        assert!(!in_step.contains(target), "collision on {target} at d={d}");
                        in_step.push(*control);
                        in_step.push(*target);
                    }
                    Instruction::Tick => in_step.clear(),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn detector_family_classification() {
        let c = circuit(3, 0.0, 3);
        let coords = c.detector_coords();
        assert_eq!(coords.len(), 24);
        let z_count = coords
            .iter()
            .filter(|c| detector_is_z_family(&c.unwrap()))
            .count();
        // 4 first-round + 4 per middle round * 2 + 4 final.
        assert_eq!(z_count, 16);
    }

    #[test]
    fn fault_location_decoding() {
        let c = circuit(3, 0.01, 1);
        let faults = c.fault_locations();
        assert!(!faults.is_empty());
        for f in &faults {
            let flips = f.pauli_flips(&c).unwrap();
            assert!(!flips.is_empty());
            assert!(flips.len() <= 2);
            assert!(f.probability(&c) > 0.0);
        }
        let bad = FaultLocation {
            instruction: 0,
            component: 0,
        };
        assert!(bad.pauli_flips(&c).is_err());
    }
}
