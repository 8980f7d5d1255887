//! Minimal CHP-style stabilizer simulator used as an independent oracle.
//!
//! Tracks destabilizer/stabilizer generators with explicit bit vectors and
//! supports H, CX, Pauli injection, measurement (reporting whether the
//! outcome was deterministic), and reset. Completely separate from the
//! crate's Pauli-frame machinery so the two can check each other.

use badlands::circuit::{Circuit, Instruction, PauliBits};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Tableau {
    n: usize,
    // rows 0..n destabilizers, n..2n stabilizers.
    x: Vec<Vec<bool>>,
    z: Vec<Vec<bool>>,
    r: Vec<bool>,
}

impl Tableau {
    pub fn new(n: usize) -> Tableau {
        let mut t = Tableau {
            n,
            x: vec![vec![false; n]; 2 * n],
            z: vec![vec![false; n]; 2 * n],
            r: vec![false; 2 * n],
        };
        for i in 0..n {
            t.x[i][i] = true; // destabilizer X_i
            t.z[n + i][i] = true; // stabilizer Z_i
        }
        t
    }

    pub fn h(&mut self, a: usize) {
        for i in 0..2 * self.n {
            let xa = self.x[i][a];
            let za = self.z[i][a];
            self.r[i] ^= xa && za;
            self.x[i][a] = za;
            self.z[i][a] = xa;
        }
    }

    pub fn cx(&mut self, a: usize, b: usize) {
        for i in 0..2 * self.n {
            let (xa, za) = (self.x[i][a], self.z[i][a]);
            let (xb, zb) = (self.x[i][b], self.z[i][b]);
            self.r[i] ^= xa && zb && (xb == za);
            self.x[i][b] = xb ^ xa;
            self.z[i][a] = za ^ zb;
        }
    }

    /// Inject a Pauli error: flips the sign of every generator that
    /// anticommutes with it.
    pub fn pauli(&mut self, a: usize, bits: PauliBits) {
        for i in 0..2 * self.n {
            if bits.x && self.z[i][a] {
                self.r[i] = !self.r[i];
            }
            if bits.z && self.x[i][a] {
                self.r[i] = !self.r[i];
            }
        }
    }

    /// Phase contribution of multiplying row h by row i on one qubit
    /// (the Aaronson–Gottesman g function, in {-1, 0, 1}).
    fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
        match (x1, z1) {
            (false, false) => 0,
            (true, true) => (z2 as i32) - (x2 as i32),
            (true, false) => (z2 as i32) * (2 * (x2 as i32) - 1),
            (false, true) => (x2 as i32) * (1 - 2 * (z2 as i32)),
        }
    }

    /// row h *= row i
    fn row_mult(&mut self, h: usize, i: usize) {
        let mut phase = 2 * (self.r[h] as i32) + 2 * (self.r[i] as i32);
        for q in 0..self.n {
            phase += Self::g(self.x[i][q], self.z[i][q], self.x[h][q], self.z[h][q]);
        }
        let phase = phase.rem_euclid(4);
        assert!(phase == 0 || phase == 2, "non-Hermitian generator product");
        self.r[h] = phase == 2;
        for q in 0..self.n {
            self.x[h][q] ^= self.x[i][q];
            self.z[h][q] ^= self.z[i][q];
        }
    }

    /// Measure qubit a in the Z basis; returns (outcome, was_deterministic).
    pub fn measure(&mut self, a: usize, rng: &mut ChaCha8Rng) -> (bool, bool) {
        let n = self.n;
        if let Some(p) = (n..2 * n).find(|&i| self.x[i][a]) {
            // Random outcome.
            for i in 0..2 * n {
                if i != p && self.x[i][a] {
                    self.row_mult(i, p);
                }
            }
            // Destabilizer slot gets the old stabilizer row.
            self.x[p - n] = self.x[p].clone();
            self.z[p - n] = self.z[p].clone();
            self.r[p - n] = self.r[p];
            self.x[p] = vec![false; n];
            self.z[p] = vec![false; n];
            self.z[p][a] = true;
            let outcome = rng.gen::<bool>();
            self.r[p] = outcome;
            (outcome, false)
        } else {
            // Deterministic: accumulate the product of stabilizers matching
            // destabilizers that anticommute with Z_a, in a scratch row.
            let scratch = self.scratch_product(a);
            (scratch, true)
        }
    }

    fn scratch_product(&mut self, a: usize) -> bool {
        // Temporarily extend with a scratch row.
        self.x.push(vec![false; self.n]);
        self.z.push(vec![false; self.n]);
        self.r.push(false);
        let scratch = 2 * self.n;
        for i in 0..self.n {
            if self.x[i][a] {
                self.row_mult(scratch, i + self.n);
            }
        }
        let out = self.r[scratch];
        self.x.pop();
        self.z.pop();
        self.r.pop();
        out
    }

    pub fn reset(&mut self, a: usize, rng: &mut ChaCha8Rng) {
        let (bit, _) = self.measure(a, rng);
        if bit {
            self.pauli(
                a,
                PauliBits {
                    x: true,
                    z: false,
                },
            );
        }
    }
}

/// Result of a full tableau run of a circuit.
pub struct TableauRun {
    pub measurements: Vec<bool>,
    pub deterministic: Vec<bool>,
    pub detectors: Vec<bool>,
    pub observables: Vec<bool>,
}

/// Simulate a circuit exactly (noise channels silent), optionally injecting
/// the given Pauli flips immediately at one instruction index.
pub fn run_circuit(
    circuit: &Circuit,
    seed: u64,
    inject: Option<(usize, &[(u32, PauliBits)])>,
) -> TableauRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tableau::new(circuit.num_qubits() as usize);
    let mut measurements = Vec::new();
    let mut deterministic = Vec::new();
    let mut detectors = Vec::new();
    let mut observables: Vec<bool> = vec![false; circuit.num_observables() as usize];
    for (idx, ins) in circuit.instructions.iter().enumerate() {
        if let Some((at, flips)) = inject {
            if at == idx {
                for (q, bits) in flips {
                    t.pauli(*q as usize, *bits);
                }
            }
        }
        match ins {
            Instruction::QubitCoords { .. } | Instruction::Tick => {}
            Instruction::XError { .. }
            | Instruction::Depolarize1 { .. }
            | Instruction::Depolarize2 { .. } => {}
            Instruction::Reset { q } => t.reset(*q as usize, &mut rng),
            Instruction::Hadamard { q } => t.h(*q as usize),
            Instruction::ControlledX { control, target } => {
                t.cx(*control as usize, *target as usize)
            }
            Instruction::Measure { q } => {
                let (bit, det) = t.measure(*q as usize, &mut rng);
                measurements.push(bit);
                deterministic.push(det);
            }
            Instruction::MeasureReset { q } => {
                let (bit, det) = t.measure(*q as usize, &mut rng);
                measurements.push(bit);
                deterministic.push(det);
                if bit {
                    t.pauli(
                        *q as usize,
                        PauliBits {
                            x: true,
                            z: false,
                        },
                    );
                }
            }
            Instruction::Detector { offsets, .. } => {
                let bit = offsets
                    .iter()
                    .fold(false, |acc, &k| acc ^ measurements[measurements.len() - k as usize]);
                detectors.push(bit);
            }
            Instruction::ObservableInclude { id, offsets } => {
                let bit = offsets
                    .iter()
                    .fold(false, |acc, &k| acc ^ measurements[measurements.len() - k as usize]);
                observables[*id as usize] ^= bit;
            }
        }
    }
    TableauRun {
        measurements,
        deterministic,
        detectors,
        observables,
    }
}
