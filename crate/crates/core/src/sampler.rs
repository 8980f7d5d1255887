//! Pauli-frame Monte Carlo sampling.
//!
//! Shots are simulated 64 at a time: each qubit carries one X-component and
//! one Z-component machine word whose bit lanes are independent shots, so
//! Clifford gates are single XOR/swap operations across the whole batch.
//! Noise channels draw their hit lanes by geometric skipping, which keeps
//! the cost proportional to the number of actual faults rather than the
//! number of (instruction, shot) pairs.
//!
//! Randomness is keyed by `(seed, block index)` with a counter-based
//! generator, so results depend only on `(seed, shots)` — not on thread
//! count or traversal order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::{Circuit, FaultLocation, Instruction};
use crate::error::{Error, Result};

/// Shots per simulation block (one bit lane per shot).
pub const LANES: u64 = 64;

/// Detection events and observable flips for a batch of shots.
///
/// Bits are stored block-major: `words[block * stride + column]` holds 64
/// shots of one detector (or observable) column.
#[derive(Clone, Debug)]
pub struct DetectionSample {
    shots: u64,
    num_detectors: u32,
    num_observables: u32,
    detector_words: Vec<u64>,
    observable_words: Vec<u64>,
}

impl DetectionSample {
    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn num_detectors(&self) -> u32 {
        self.num_detectors
    }

    pub fn num_observables(&self) -> u32 {
        self.num_observables
    }

    #[inline]
    pub fn detector(&self, shot: u64, det: u32) -> bool {
        debug_assert!(shot < self.shots && det < self.num_detectors);
        let block = (shot / LANES) as usize;
        let lane = shot % LANES;
        let word = self.detector_words[block * self.num_detectors as usize + det as usize];
        word >> lane & 1 == 1
    }

    #[inline]
    pub fn observable(&self, shot: u64, obs: u32) -> bool {
        debug_assert!(shot < self.shots && obs < self.num_observables);
        let block = (shot / LANES) as usize;
        let lane = shot % LANES;
        let word = self.observable_words[block * self.num_observables as usize + obs as usize];
        word >> lane & 1 == 1
    }

    /// Raw 64-shot word for one detector column within one block.
    pub(crate) fn detector_word(&self, block: usize, det: u32) -> u64 {
        self.detector_words[block * self.num_detectors as usize + det as usize]
    }

    pub(crate) fn observable_word(&self, block: usize, obs: u32) -> u64 {
        self.observable_words[block * self.num_observables as usize + obs as usize]
    }

    pub(crate) fn num_blocks(&self) -> usize {
        self.shots.div_ceil(LANES) as usize
    }

    /// Shots with at least one detection event.
    pub fn shots_with_detections(&self) -> u64 {
        (0..self.shots)
            .filter(|&s| (0..self.num_detectors).any(|d| self.detector(s, d)))
            .count() as u64
    }

    /// ASCII dump: one line of '0'/'1' per shot.
    pub fn detectors_to_01(&self) -> String {
        let mut out = String::with_capacity((self.num_detectors as usize + 1) * self.shots as usize);
        for s in 0..self.shots {
            for d in 0..self.num_detectors {
                out.push(if self.detector(s, d) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn observables_to_01(&self) -> String {
        let mut out = String::new();
        for s in 0..self.shots {
            for o in 0..self.num_observables {
                out.push(if self.observable(s, o) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Binary dump: per shot, `ceil(columns / 8)` bytes, bit `k % 8` of byte
    /// `k / 8` (LSB first) — the de-facto 8-bits-per-byte sample layout.
    pub fn detectors_to_b8(&self) -> Vec<u8> {
        pack_b8(self.shots, self.num_detectors, |s, k| self.detector(s, k))
    }

    pub fn observables_to_b8(&self) -> Vec<u8> {
        pack_b8(self.shots, self.num_observables, |s, k| {
            self.observable(s, k)
        })
    }
}

fn pack_b8(shots: u64, columns: u32, bit: impl Fn(u64, u32) -> bool) -> Vec<u8> {
    let stride = columns.div_ceil(8) as usize;
    let mut out = vec![0u8; stride * shots as usize];
    for s in 0..shots {
        let base = s as usize * stride;
        for k in 0..columns {
            if bit(s, k) {
                out[base + (k / 8) as usize] |= 1 << (k % 8);
            }
        }
    }
    out
}

/// Flat op-codes with measurement-record references resolved ahead of time.
enum Op {
    Hadamard(u32),
    Cx(u32, u32),
    Reset(u32),
    Measure(u32),
    MeasureReset(u32),
    XError { q: u32, p: f64, instr: u32 },
    Dep1 { q: u32, p: f64, instr: u32 },
    Dep2 { a: u32, b: u32, p: f64, instr: u32 },
}

pub(crate) struct Compiled {
    num_qubits: usize,
    num_measurements: usize,
    ops: Vec<Op>,
    /// Absolute measurement indices per detector.
    detectors: Vec<Vec<u32>>,
    /// Absolute measurement indices per observable id.
    observables: Vec<Vec<u32>>,
}

impl Compiled {
    pub(crate) fn new(circuit: &Circuit) -> Compiled {
        let mut ops = Vec::with_capacity(circuit.instructions.len());
        let mut detectors = Vec::with_capacity(circuit.num_detectors() as usize);
        let mut observables = vec![Vec::new(); circuit.num_observables() as usize];
        let mut meas: u32 = 0;
        for (idx, ins) in circuit.instructions.iter().enumerate() {
            let instr = idx as u32;
            match ins {
                Instruction::QubitCoords { .. } | Instruction::Tick => {}
                Instruction::Reset { q } => ops.push(Op::Reset(*q)),
                Instruction::Hadamard { q } => ops.push(Op::Hadamard(*q)),
                Instruction::ControlledX { control, target } => {
                    ops.push(Op::Cx(*control, *target))
                }
                Instruction::Measure { q } => {
                    ops.push(Op::Measure(*q));
                    meas += 1;
                }
                Instruction::MeasureReset { q } => {
                    ops.push(Op::MeasureReset(*q));
                    meas += 1;
                }
                Instruction::XError { p, q } => ops.push(Op::XError {
                    q: *q,
                    p: *p,
                    instr,
                }),
                Instruction::Depolarize1 { p, q } => ops.push(Op::Dep1 {
                    q: *q,
                    p: *p,
                    instr,
                }),
                Instruction::Depolarize2 { p, a, b } => ops.push(Op::Dep2 {
                    a: *a,
                    b: *b,
                    p: *p,
                    instr,
                }),
                Instruction::Detector { offsets, .. } => {
                    detectors.push(offsets.iter().map(|k| meas - k).collect());
                }
                Instruction::ObservableInclude { id, offsets } => {
                    observables[*id as usize].extend(offsets.iter().map(|k| meas - k));
                }
            }
        }
        Compiled {
            num_qubits: circuit.num_qubits() as usize,
            num_measurements: meas as usize,
            ops,
            detectors,
            observables,
        }
    }
}

/// Per-block frame state.
struct Frame {
    x: Vec<u64>,
    z: Vec<u64>,
    meas: Vec<u64>,
    cursor: usize,
}

impl Frame {
    fn new(compiled: &Compiled) -> Frame {
        Frame {
            x: vec![0; compiled.num_qubits],
            z: vec![0; compiled.num_qubits],
            meas: vec![0; compiled.num_measurements],
            cursor: 0,
        }
    }

    #[inline]
    fn clear_qubit(&mut self, q: u32) {
        self.x[q as usize] = 0;
        self.z[q as usize] = 0;
    }
}

/// Call `f(lane)` for each lane hit by an event of probability `p`,
/// consuming the RNG geometrically.
#[inline]
fn for_each_hit(rng: &mut ChaCha8Rng, p: f64, mut f: impl FnMut(u32)) {
    if p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        for lane in 0..LANES as u32 {
            f(lane);
        }
        return;
    }
    let denom = (1.0 - p).ln();
    let mut lane = 0u64;
    loop {
        let u: f64 = rng.gen();
        let skip = ((1.0 - u).ln() / denom) as u64; // saturating cast on overflow
        lane = lane.saturating_add(skip);
        if lane >= LANES {
            return;
        }
        f(lane as u32);
        lane += 1;
    }
}

#[inline]
fn apply_single_pauli(frame: &mut Frame, q: u32, lane_bit: u64, code: u8) {
    // code: 1 = X, 2 = Y, 3 = Z.
    if code == 1 || code == 2 {
        frame.x[q as usize] ^= lane_bit;
    }
    if code == 2 || code == 3 {
        frame.z[q as usize] ^= lane_bit;
    }
}

fn run_ops(compiled: &Compiled, frame: &mut Frame, mut rng: Option<&mut ChaCha8Rng>) {
    for op in &compiled.ops {
        match op {
            Op::Hadamard(q) => {
                let q = *q as usize;
                let (x, z) = (frame.x[q], frame.z[q]);
                frame.x[q] = z;
                frame.z[q] = x;
            }
            Op::Cx(c, t) => {
                frame.x[*t as usize] ^= frame.x[*c as usize];
                frame.z[*c as usize] ^= frame.z[*t as usize];
            }
            Op::Reset(q) => frame.clear_qubit(*q),
            Op::Measure(q) => {
                frame.meas[frame.cursor] = frame.x[*q as usize];
                frame.cursor += 1;
            }
            Op::MeasureReset(q) => {
                frame.meas[frame.cursor] = frame.x[*q as usize];
                frame.cursor += 1;
                frame.clear_qubit(*q);
            }
            Op::XError { q, p, .. } => {
                if let Some(rng) = rng.as_deref_mut() {
                    let mut mask = 0u64;
                    for_each_hit(rng, *p, |lane| mask |= 1 << lane);
                    frame.x[*q as usize] ^= mask;
                }
            }
            Op::Dep1 { q, p, .. } => {
                if let Some(rng) = rng.as_deref_mut() {
                    let mut hits: Vec<u32> = Vec::new();
                    for_each_hit(rng, *p, |lane| hits.push(lane));
                    for lane in hits {
                        let code = rng.gen_range(1..4u8);
                        apply_single_pauli(frame, *q, 1 << lane, code);
                    }
                }
            }
            Op::Dep2 { a, b, p, .. } => {
                if let Some(rng) = rng.as_deref_mut() {
                    let mut hits: Vec<u32> = Vec::new();
                    for_each_hit(rng, *p, |lane| hits.push(lane));
                    for lane in hits {
                        let code = rng.gen_range(1..16u8);
                        apply_single_pauli(frame, *a, 1 << lane, code >> 2);
                        apply_single_pauli(frame, *b, 1 << lane, code & 3);
                    }
                }
            }
        }
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&block.to_le_bytes());
    key[16..24].copy_from_slice(b"frameblk");
    ChaCha8Rng::from_seed(key)
}

fn evaluate_columns(compiled: &Compiled, frame: &Frame) -> (Vec<u64>, Vec<u64>) {
    let dets = compiled
        .detectors
        .iter()
        .map(|refs| refs.iter().fold(0u64, |acc, &m| acc ^ frame.meas[m as usize]))
        .collect();
    let obs = compiled
        .observables
        .iter()
        .map(|refs| refs.iter().fold(0u64, |acc, &m| acc ^ frame.meas[m as usize]))
        .collect();
    (dets, obs)
}

/// Monte Carlo sample `shots` shots of the circuit's detectors and
/// observables. Deterministic given `(seed, shots)`.
pub fn sample(circuit: &Circuit, shots: u64, seed: u64) -> Result<DetectionSample> {
    if shots == 0 {
        return Err(Error::EmptyInput("shots must be >= 1"));
    }
    let compiled = Compiled::new(circuit);
    let blocks = shots.div_ceil(LANES);
    let per_block: Vec<(Vec<u64>, Vec<u64>)> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = block_rng(seed, block);
            let mut frame = Frame::new(&compiled);
            run_ops(&compiled, &mut frame, Some(&mut rng));
            debug_assert_eq!(frame.cursor, compiled.num_measurements);
            evaluate_columns(&compiled, &frame)
        })
        .collect();
    let mut detector_words = Vec::with_capacity(blocks as usize * compiled.detectors.len());
    let mut observable_words = Vec::with_capacity(blocks as usize * compiled.observables.len());
    for (dets, obs) in per_block {
        detector_words.extend(dets);
        observable_words.extend(obs);
    }
    Ok(DetectionSample {
        shots,
        num_detectors: circuit.num_detectors(),
        num_observables: circuit.num_observables(),
        detector_words,
        observable_words,
    })
}

/// Deterministically propagate a batch of single faults; entry `i` of the
/// result is `(fired detector ids, observable-0 flip)` for `faults[i]` with
/// every other channel silent.
pub fn propagate_faults(
    circuit: &Circuit,
    faults: &[FaultLocation],
) -> Result<Vec<(Vec<u32>, bool)>> {
    let compiled = Compiled::new(circuit);
    // Validate and decode up front so errors carry the fault, not a lane.
    let mut flips = Vec::with_capacity(faults.len());
    for f in faults {
        flips.push(f.pauli_flips(circuit)?);
    }
    let chunks: Vec<(usize, &[FaultLocation])> = faults
        .chunks(LANES as usize)
        .enumerate()
        .map(|(i, c)| (i * LANES as usize, c))
        .collect();
    type LaneInjection<'a> = (usize, u32, &'a [(u32, crate::circuit::PauliBits)]);
    let per_chunk: Vec<Vec<(Vec<u32>, bool)>> = chunks
        .par_iter()
        .map(|(base, chunk)| {
            let mut frame = Frame::new(&compiled);
            // lane -> injected flips, grouped by instruction index.
            let mut schedule: Vec<LaneInjection> = chunk
                .iter()
                .enumerate()
                .map(|(lane, f)| (f.instruction, lane as u32, flips[base + lane].as_slice()))
                .collect();
            schedule.sort_by_key(|(instr, lane, _)| (*instr, *lane));
            let mut cursor = 0usize;
            for op in &compiled.ops {
                let instr = match op {
                    Op::XError { instr, .. } | Op::Dep1 { instr, .. } | Op::Dep2 { instr, .. } => {
                        Some(*instr as usize)
                    }
                    _ => None,
                };
                if let Some(instr) = instr {
                    while cursor < schedule.len() && schedule[cursor].0 == instr {
                        let (_, lane, flip) = schedule[cursor];
                        for (q, bits) in flip {
                            if bits.x {
                                frame.x[*q as usize] ^= 1 << lane;
                            }
                            if bits.z {
                                frame.z[*q as usize] ^= 1 << lane;
                            }
                        }
                        cursor += 1;
                    }
                }
                run_one_noiseless(op, &mut frame);
            }
            let (det_words, obs_words) = evaluate_columns(&compiled, &frame);
            (0..chunk.len())
                .map(|lane| {
                    let fired: Vec<u32> = (0..det_words.len() as u32)
                        .filter(|&d| det_words[d as usize] >> lane & 1 == 1)
                        .collect();
                    let flip = obs_words
                        .first()
                        .map(|w| w >> lane & 1 == 1)
                        .unwrap_or(false);
                    (fired, flip)
                })
                .collect()
        })
        .collect();
    Ok(per_chunk.into_iter().flatten().collect())
}

fn run_one_noiseless(op: &Op, frame: &mut Frame) {
    match op {
        Op::Hadamard(q) => {
            let q = *q as usize;
            let (x, z) = (frame.x[q], frame.z[q]);
            frame.x[q] = z;
            frame.z[q] = x;
        }
        Op::Cx(c, t) => {
            frame.x[*t as usize] ^= frame.x[*c as usize];
            frame.z[*c as usize] ^= frame.z[*t as usize];
        }
        Op::Reset(q) => frame.clear_qubit(*q),
        Op::Measure(q) => {
            frame.meas[frame.cursor] = frame.x[*q as usize];
            frame.cursor += 1;
        }
        Op::MeasureReset(q) => {
            frame.meas[frame.cursor] = frame.x[*q as usize];
            frame.cursor += 1;
            frame.clear_qubit(*q);
        }
        Op::XError { .. } | Op::Dep1 { .. } | Op::Dep2 { .. } => {}
    }
}

/// Single-fault convenience wrapper around [`propagate_faults`].
pub fn propagate_fault(circuit: &Circuit, fault: FaultLocation) -> Result<(Vec<u32>, bool)> {
    Ok(propagate_faults(circuit, &[fault])?.remove(0))
}
