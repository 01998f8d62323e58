//! Hand-built reference states for the circuit tests.
#![allow(dead_code)]

use num_complex::Complex64;
use qnd_core::observables::BELL_KETS;
use qnd_core::{BellCoefficients, StateVector};

pub const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `Σ w_b |bell_b>` as a raw amplitude vector (ψ⁻, ψ⁺, φ⁻, φ⁺ order).
pub fn bell_combination(weights: [Complex64; 4]) -> [Complex64; 4] {
    std::array::from_fn(|i| (0..4).map(|b| weights[b] * BELL_KETS[b][i]).sum())
}

/// `system ⊗ |ancilla>` for a single ancilla, summed over ancilla values.
pub fn with_one_ancilla(on_zero: [Complex64; 4], on_one: [Complex64; 4]) -> StateVector {
    let mut amps = vec![c(0.0, 0.0); 8];
    for s in 0..4 {
        amps[s << 1] = on_zero[s];
        amps[s << 1 | 1] = on_one[s];
    }
    StateVector::from_amplitudes(amps).unwrap()
}

/// Composite after the first rotation layer of the single-ancilla circuit:
/// `(α|ψ⁻> - iη|ψ⁺> + γ|φ⁻> - iβ|φ⁺>)|0>`.
pub fn parity_after_rotations(b: &BellCoefficients) -> StateVector {
    let sys = bell_combination([c(b.alpha, 0.0), c(0.0, -b.eta), c(b.gamma, 0.0), c(0.0, -b.beta)]);
    with_one_ancilla(sys, [c(0.0, 0.0); 4])
}

/// After the CNOTs: `(α|ψ⁻> - iη|ψ⁺>)|1> + (γ|φ⁻> - iβ|φ⁺>)|0>`.
pub fn parity_after_cnots(b: &BellCoefficients) -> StateVector {
    let one = bell_combination([c(b.alpha, 0.0), c(0.0, -b.eta), c(0.0, 0.0), c(0.0, 0.0)]);
    let zero = bell_combination([c(0.0, 0.0), c(0.0, 0.0), c(b.gamma, 0.0), c(0.0, -b.beta)]);
    with_one_ancilla(zero, one)
}

/// Before readout: `(α|ψ⁻> + η|φ⁺>)|1> + (γ|φ⁻> + β|ψ⁺>)|0>`.
pub fn parity_before_readout(b: &BellCoefficients) -> StateVector {
    let one = bell_combination([c(b.alpha, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(b.eta, 0.0)]);
    let zero = bell_combination([c(0.0, 0.0), c(b.beta, 0.0), c(b.gamma, 0.0), c(0.0, 0.0)]);
    with_one_ancilla(zero, one)
}

/// Predictability preset before readout:
/// `[(η-γ)|00>|00> + (β-α)|01>|01> + (α+β)|10>|10> + (γ+η)|11>|11>]/√2`.
pub fn predictability_before_readout(b: &BellCoefficients) -> StateVector {
    let weights = [b.eta - b.gamma, b.beta - b.alpha, b.alpha + b.beta, b.gamma + b.eta];
    let mut amps = vec![c(0.0, 0.0); 16];
    for (s, w) in weights.iter().enumerate() {
        amps[s << 2 | s] = c(w * H, 0.0);
    }
    StateVector::from_amplitudes(amps).unwrap()
}

/// `|+> = (|1> + |0>)/√2`, `|-> = (|1> - |0>)/√2`.
pub const PLUS: [f64; 2] = [H, H];
pub const MINUS: [f64; 2] = [-H, H];

/// Visibility preset before readout:
/// `[(η+β)|+>|+>|00> + (γ-α)|+>|->|01> + (α+γ)|->|+>|10> + (η-β)|->|->|11>]/√2`.
pub fn visibility_before_readout(b: &BellCoefficients) -> StateVector {
    let terms = [
        (b.eta + b.beta, PLUS, PLUS, 0b00),
        (b.gamma - b.alpha, PLUS, MINUS, 0b01),
        (b.alpha + b.gamma, MINUS, PLUS, 0b10),
        (b.eta - b.beta, MINUS, MINUS, 0b11),
    ];
    let mut amps = vec![c(0.0, 0.0); 16];
    for (w, q0, q1, anc) in terms {
        for i in 0..2 {
            for j in 0..2 {
                amps[(i << 1 | j) << 2 | anc] += c(w * H * q0[i] * q1[j], 0.0);
            }
        }
    }
    StateVector::from_amplitudes(amps).unwrap()
}

/// `1 - |<a|b>|`.
pub fn phase_distance(a: &StateVector, b: &StateVector) -> f64 {
    (1.0 - a.overlap(b)).abs()
}
