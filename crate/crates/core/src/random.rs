//! Random states and local unitaries for property checks.
//!
//! Complex states are normalized vectors of independent standard complex
//! Gaussians, which is invariant under unitary rotations. Real states use real
//! Gaussians the same way.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::observables::BellCoefficients;
use crate::state::{Operator2, SingleQubitGate, StateVector};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn nonzero_norm<R: Rng + ?Sized>(rng: &mut R, mut draw: impl FnMut(&mut R) -> Vec<Complex64>) -> StateVector {
    loop {
        let amplitudes = draw(rng);
        if let Ok(s) = StateVector::normalized(amplitudes) {
            return s;
        }
    }
}

pub fn random_complex_state<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> StateVector {
    nonzero_norm(rng, |rng| {
        (0..1usize << n_qubits)
            .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
            .collect()
    })
}

pub fn random_real_state<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> StateVector {
    nonzero_norm(rng, |rng| {
        (0..1usize << n_qubits)
            .map(|_| Complex64::new(gaussian(rng), 0.0))
            .collect()
    })
}

/// Uniformly distributed point on the unit 3-sphere of real Bell coefficients.
pub fn random_bell<R: Rng + ?Sized>(rng: &mut R) -> BellCoefficients {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| gaussian(rng));
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            let [alpha, beta, gamma, eta] = v.map(|x| x / norm);
            return BellCoefficients { alpha, beta, gamma, eta };
        }
    }
}

/// Haar-random element of U(2).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> SingleQubitGate {
    let column = random_complex_state(rng, 1);
    let (a, b) = (column.amplitudes()[0], column.amplitudes()[1]);
    let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    let op = Operator2([[a, -b.conj() * phase], [b, a.conj() * phase]]);
    SingleQubitGate::new(op).expect("columns are orthonormal by construction")
}
