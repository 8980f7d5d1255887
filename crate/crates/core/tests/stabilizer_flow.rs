//! Cross-validation of the circuit generator and frame propagation against
//! an independent stabilizer (tableau) simulation.
//!
//! The frame sampler treats detectors as deterministic by construction, so
//! these tests are what actually pins down the circuit's correctness: every
//! detector and the observable must be constant under exact noiseless
//! simulation, and single-fault symptoms must agree between the tableau and
//! the frame propagator.

mod common;

use badlands::circuit::FaultLocation;
use badlands::sampler::propagate_faults;
use common::{homogeneous_circuit, tableau};

#[test]
fn noiseless_detectors_are_deterministically_zero() {
    for (d, rounds) in [(3, 1), (3, 3), (5, 2)] {
        let circuit = homogeneous_circuit(d, 0.001, rounds);
        for seed in 0..5 {
            let run = tableau::run_circuit(&circuit, seed, None);
            assert!(
                run.detectors.iter().all(|&b| !b),
                "noisy detector bits at d={d}, rounds={rounds}, seed={seed}"
            );
            assert!(
                run.observables.iter().all(|&b| !b),
                "observable not deterministic at d={d}, rounds={rounds}, seed={seed}"
            );
        }
    }
}

#[test]
fn first_round_z_checks_are_deterministic_and_x_checks_random() {
    let circuit = homogeneous_circuit(3, 0.0, 2);
    let run = tableau::run_circuit(&circuit, 9, None);
    // Round 1 measures 8 ancillas: the 4 Z checks deterministic on |0..0>,
    // the 4 X checks random.
    let first_round = &run.deterministic[0..8];
    assert_eq!(first_round.iter().filter(|&&det| det).count(), 4);
    // Final data readout in the Z basis of a Z-stabilizer eigenstate is a
    // stabilizer-determined parity for each Z check; the detector
    // comparisons below already cover it, so just sanity-check counts.
    assert_eq!(run.measurements.len(), 25);
}

#[test]
fn single_fault_symptoms_match_tableau() {
    let circuit = homogeneous_circuit(3, 0.01, 2);
    let faults = circuit.fault_locations();
    let frame_symptoms = propagate_faults(&circuit, &faults).unwrap();

    let seed = 1234;
    let baseline = tableau::run_circuit(&circuit, seed, None);
    assert!(baseline.detectors.iter().all(|&b| !b));

    // The tableau path is slow, so stride over the fault list; the stride is
    // coprime with the channel component counts to hit every channel kind
    // and component index.
    for (i, fault) in faults.iter().enumerate().step_by(7) {
        let flips = fault.pauli_flips(&circuit).unwrap();
        let run = tableau::run_circuit(&circuit, seed, Some((fault.instruction, &flips)));
        let fired: Vec<u32> = run
            .detectors
            .iter()
            .enumerate()
            .filter(|(k, &bit)| {
                // Same random draws, so differing bits are exactly the
                // fault's symptom. Baseline bits are all zero here.
                let _ = k;
                bit
            })
            .map(|(k, _)| k as u32)
            .collect();
        assert_eq!(
            fired, frame_symptoms[i].0,
            "detector symptom mismatch for fault {fault:?}"
        );
        assert_eq!(
            run.observables[0], frame_symptoms[i].1,
            "observable mismatch for fault {fault:?}"
        );
    }
}

#[test]
fn fault_components_cover_expected_counts() {
    let circuit = homogeneous_circuit(3, 0.01, 3);
    let faults = circuit.fault_locations();
    let (mut x, mut d1, mut d2) = (0usize, 0usize, 0usize);
    for f in &faults {
        match circuit.instructions[f.instruction] {
            badlands::circuit::Instruction::XError { .. } => x += 1,
            badlands::circuit::Instruction::Depolarize1 { .. } => d1 += 1,
            badlands::circuit::Instruction::Depolarize2 { .. } => d2 += 1,
            _ => unreachable!(),
        }
    }
    // 17 prep + 3 rounds * 8 ancillas * (pre-measure + re-prep) + 9 data
    // readout X errors.
    assert_eq!(x, 17 + 3 * 8 * 2 + 9);
    // Two Hadamard layers on 4 X-ancillas per round, 3 components each.
    assert_eq!(d1, 3 * (2 * 4) * 3);
    // (4 interior * 4 + 4 boundary * 2) CX gates per round, 15 components.
    assert_eq!(d2, 3 * 24 * 15);
    let _ = FaultLocation {
        instruction: 0,
        component: 0,
    };
}
