//! Concurrence, visibility and predictability of two-qubit pure states.
//!
//! Particle 1 is qubit 0, particle 2 is qubit 1. Bell kets are
//! `|ψ±> = (|10> ± |01>)/√2` and `|φ±> = (|11> ± |00>)/√2`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{apply_operator_string, apply_pauli_string, expectation, operator_average, Operator2, Pauli, StateVector};
use crate::{NORM_TOL, REBIT_TOL};

const H: f64 = FRAC_1_SQRT_2;

/// Bell kets as real computational-basis vectors, in the order ψ⁻, ψ⁺, φ⁻, φ⁺.
pub const BELL_KETS: [[f64; 4]; 4] = [
    [0.0, -H, H, 0.0],
    [0.0, H, H, 0.0],
    [-H, 0.0, 0.0, H],
    [H, 0.0, 0.0, H],
];

/// One of the two qubits of the system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Particle {
    First,
    Second,
}

impl Particle {
    pub const BOTH: [Particle; 2] = [Particle::First, Particle::Second];

    pub fn qubit(self) -> usize {
        match self {
            Particle::First => 0,
            Particle::Second => 1,
        }
    }

    /// Maps the 1-based particle label to a particle.
    pub fn from_label(k: u8) -> Option<Particle> {
        match k {
            1 => Some(Particle::First),
            2 => Some(Particle::Second),
            _ => None,
        }
    }
}

/// Real coefficients of a two-qubit state on ψ⁻, ψ⁺, φ⁻, φ⁺.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub eta: f64,
}

impl BellCoefficients {
    pub fn new(alpha: f64, beta: f64, gamma: f64, eta: f64) -> Result<Self> {
        let c = BellCoefficients { alpha, beta, gamma, eta };
        c.validate()?;
        Ok(c)
    }

    pub fn from_array([alpha, beta, gamma, eta]: [f64; 4]) -> Result<Self> {
        Self::new(alpha, beta, gamma, eta)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.alpha, self.beta, self.gamma, self.eta]
    }

    pub fn normalization_defect(&self) -> f64 {
        (self.to_array().iter().map(|x| x * x).sum::<f64>() - 1.0).abs()
    }

    fn validate(&self) -> Result<()> {
        if self.to_array().iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("Bell coefficients"));
        }
        let defect = self.normalization_defect();
        if defect > NORM_TOL {
            return Err(Error::NotNormalized(1.0 + defect));
        }
        Ok(())
    }
}

/// Complementarity quantities of a two-qubit state, exact or estimated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplementarityReport {
    pub concurrence: f64,
    pub visibility_1: f64,
    pub predictability_1: f64,
    pub visibility_2: f64,
    pub predictability_2: f64,
    pub single_partitedness_1: f64,
    pub single_partitedness_2: f64,
    /// `1 - (C² + V₁² + P₁²)`
    pub triality_residual_1: f64,
    /// `1 - (C² + V₂² + P₂²)`
    pub triality_residual_2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standard_errors: Option<ReportErrors>,
}

/// One-sigma errors attached to an estimated [`ComplementarityReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportErrors {
    pub concurrence: f64,
    pub visibility_1: f64,
    pub predictability_1: f64,
    pub visibility_2: f64,
    pub predictability_2: f64,
    pub single_partitedness_1: f64,
    pub single_partitedness_2: f64,
    pub triality_residual_1: f64,
    pub triality_residual_2: f64,
}

impl ComplementarityReport {
    /// Derives single-partitedness and residuals from the five base quantities.
    pub fn from_parts(concurrence: f64, visibility: [f64; 2], predictability: [f64; 2]) -> Self {
        let s = |k: usize| visibility[k].powi(2) + predictability[k].powi(2);
        let (s1, s2) = (s(0), s(1));
        let c2 = concurrence.powi(2);
        ComplementarityReport {
            concurrence,
            visibility_1: visibility[0],
            predictability_1: predictability[0],
            visibility_2: visibility[1],
            predictability_2: predictability[1],
            single_partitedness_1: s1,
            single_partitedness_2: s2,
            triality_residual_1: 1.0 - (c2 + s1),
            triality_residual_2: 1.0 - (c2 + s2),
            standard_errors: None,
        }
    }

    pub fn visibility(&self, k: Particle) -> f64 {
        match k {
            Particle::First => self.visibility_1,
            Particle::Second => self.visibility_2,
        }
    }

    pub fn predictability(&self, k: Particle) -> f64 {
        match k {
            Particle::First => self.predictability_1,
            Particle::Second => self.predictability_2,
        }
    }

    pub fn single_partitedness(&self, k: Particle) -> f64 {
        match k {
            Particle::First => self.single_partitedness_1,
            Particle::Second => self.single_partitedness_2,
        }
    }

    pub fn triality_residual(&self, k: Particle) -> f64 {
        match k {
            Particle::First => self.triality_residual_1,
            Particle::Second => self.triality_residual_2,
        }
    }

    /// Largest absolute difference between the base quantities of two reports.
    pub fn max_difference(&self, other: &ComplementarityReport) -> f64 {
        [
            self.concurrence - other.concurrence,
            self.visibility_1 - other.visibility_1,
            self.predictability_1 - other.predictability_1,
            self.visibility_2 - other.visibility_2,
            self.predictability_2 - other.predictability_2,
            self.triality_residual_1 - other.triality_residual_1,
            self.triality_residual_2 - other.triality_residual_2,
        ]
        .iter()
        .fold(0.0f64, |m, d| m.max(d.abs()))
    }
}

fn require_two_qubits(state: &StateVector) -> Result<()> {
    match state.n_qubits() {
        2 => Ok(()),
        n => Err(Error::NotTwoQubit(n)),
    }
}

/// Bell-basis coefficients of a two-qubit state that is real up to a global phase.
pub fn bell_from_computational(state: &StateVector) -> Result<BellCoefficients> {
    require_two_qubits(state)?;
    let amps = state.dephased();
    let project = |ket: &[f64; 4]| -> Complex64 { ket.iter().zip(&amps).map(|(b, a)| a * b).sum() };
    let coefficients: Vec<Complex64> = BELL_KETS.iter().map(project).collect();
    let residue = coefficients.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residue > REBIT_TOL {
        return Err(Error::RebitViolation(residue));
    }
    Ok(BellCoefficients {
        alpha: coefficients[0].re,
        beta: coefficients[1].re,
        gamma: coefficients[2].re,
        eta: coefficients[3].re,
    })
}

pub fn computational_from_bell(c: &BellCoefficients) -> Result<StateVector> {
    c.validate()?;
    let weights = c.to_array();
    let amps: Vec<f64> = (0..4)
        .map(|i| BELL_KETS.iter().zip(&weights).map(|(ket, w)| ket[i] * w).sum())
        .collect();
    StateVector::from_real(&amps)
}

/// `2 |<χ|σ⁺_k|χ>|`.
pub fn visibility(state: &StateVector, k: Particle) -> Result<f64> {
    require_two_qubits(state)?;
    let avg = operator_average(state, &[(k.qubit(), Operator2::SIGMA_PLUS)])?;
    Ok(2.0 * avg.norm())
}

/// `|<χ|σᶻ_k|χ>|`.
pub fn predictability(state: &StateVector, k: Particle) -> Result<f64> {
    require_two_qubits(state)?;
    Ok(expectation(state, &[(k.qubit(), Pauli::Z)])?.abs())
}

/// `|<χ*|σʸ⊗σʸ|χ>|`, the bilinear (unconjugated) form of the spin-flipped state.
pub fn concurrence_pure(state: &StateVector) -> Result<f64> {
    require_two_qubits(state)?;
    let flipped = apply_operator_string(state, &[(0, Operator2::PAULI_Y), (1, Operator2::PAULI_Y)])?;
    let bilinear: Complex64 = state.amplitudes().iter().zip(&flipped).map(|(a, b)| a * b).sum();
    Ok(bilinear.norm())
}

/// `V_k² + P_k²`.
pub fn single_partitedness(state: &StateVector, k: Particle) -> Result<f64> {
    Ok(visibility(state, k)?.powi(2) + predictability(state, k)?.powi(2))
}

/// `1 - (C² + V_k² + P_k²)`; zero for every two-qubit pure state.
pub fn triality_residual(state: &StateVector, k: Particle) -> Result<f64> {
    Ok(1.0 - (concurrence_pure(state)?.powi(2) + single_partitedness(state, k)?))
}

/// `<O²> - <O>²` for a Pauli string.
pub fn variance(state: &StateVector, pauli_string: &[(usize, Pauli)]) -> Result<f64> {
    let mean = expectation(state, pauli_string)?;
    let image = apply_pauli_string(state, pauli_string)?;
    let second = image.iter().map(Complex64::norm_sqr).sum::<f64>();
    Ok(second - mean * mean)
}

/// `(Δ σˣ⊗1)² + (Δ σᶻ⊗1)² + (Δ σʸ⊗σʸ)²`.
pub fn variance_sum(state: &StateVector) -> Result<f64> {
    require_two_qubits(state)?;
    Ok(variance(state, &[(0, Pauli::X)])?
        + variance(state, &[(0, Pauli::Z)])?
        + variance(state, &[(0, Pauli::Y), (1, Pauli::Y)])?)
}

/// All complementarity quantities of a two-qubit state from its amplitudes.
pub fn observables_of_state(state: &StateVector) -> Result<ComplementarityReport> {
    require_two_qubits(state)?;
    let v = [visibility(state, Particle::First)?, visibility(state, Particle::Second)?];
    let p = [predictability(state, Particle::First)?, predictability(state, Particle::Second)?];
    Ok(ComplementarityReport::from_parts(concurrence_pure(state)?, v, p))
}

/// Closed-form complementarity quantities of a real Bell-basis state.
pub fn observables_from_bell(c: &BellCoefficients) -> Result<ComplementarityReport> {
    c.validate()?;
    let BellCoefficients { alpha, beta, gamma, eta } = *c;
    let visibility = [2.0 * (beta * eta - alpha * gamma).abs(), 2.0 * (beta * eta + alpha * gamma).abs()];
    let predictability = [2.0 * (alpha * beta + eta * gamma).abs(), 2.0 * (alpha * beta - eta * gamma).abs()];
    let concurrence = (alpha * alpha - beta * beta - gamma * gamma + eta * eta).abs();
    Ok(ComplementarityReport::from_parts(concurrence, visibility, predictability))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::basis_state;

    fn bell(a: f64, b: f64, g: f64, e: f64) -> BellCoefficients {
        BellCoefficients::new(a, b, g, e).unwrap()
    }

    /// Inverse of the Bell change of basis by Gauss-Jordan elimination on the
    /// matrix whose columns are the Bell kets.
    fn invert_bell_matrix() -> [[f64; 4]; 4] {
        let mut m = [[0.0; 8]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (col, ket) in BELL_KETS.iter().enumerate() {
                row[col] = ket[r];
            }
            row[4 + r] = 1.0;
        }
        for p in 0..4 {
            let pivot = (p..4).max_by(|&a, &b| m[a][p].abs().total_cmp(&m[b][p].abs())).unwrap();
            m.swap(p, pivot);
            let d = m[p][p];
            m[p].iter_mut().for_each(|x| *x /= d);
            for r in 0..4 {
                if r != p {
                    let f = m[r][p];
                    let prow = m[p];
                    m[r].iter_mut().zip(prow).for_each(|(x, y)| *x -= f * y);
                }
            }
        }
        std::array::from_fn(|r| std::array::from_fn(|c| m[r][4 + c]))
    }

    fn coefficients_by_inversion(amps: [f64; 4]) -> [f64; 4] {
        let inv = invert_bell_matrix();
        std::array::from_fn(|r| (0..4).map(|c| inv[r][c] * amps[c]).sum())
    }

    fn assert_close(a: [f64; 4], b: [f64; 4], tol: f64) {
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn bell_from_computational_examples() {
        let psi_minus = StateVector::from_real(&BELL_KETS[0]).unwrap();
        assert_close(bell_from_computational(&psi_minus).unwrap().to_array(), [1.0, 0.0, 0.0, 0.0], 1e-15);

        let s00 = basis_state(2, 0).unwrap();
        let oracle = coefficients_by_inversion([1.0, 0.0, 0.0, 0.0]);
        assert_close(oracle, [0.0, 0.0, -H, H], 1e-15);
        assert_close(bell_from_computational(&s00).unwrap().to_array(), oracle, 1e-15);

        let product = StateVector::from_real(&[0.5; 4]).unwrap();
        let oracle = coefficients_by_inversion([0.5; 4]);
        assert_close(oracle, [0.0, H, 0.0, H], 1e-15);
        assert_close(bell_from_computational(&product).unwrap().to_array(), oracle, 1e-15);
    }

    #[test]
    fn bell_from_computational_removes_global_phase() {
        let phase = Complex64::from_polar(1.0, 0.9);
        let amps = BELL_KETS[3].iter().map(|&x| phase * x).collect();
        let s = StateVector::from_amplitudes(amps).unwrap();
        let c = bell_from_computational(&s).unwrap();
        assert!((c.eta.abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_from_computational_rejects_complex_states() {
        let s = StateVector::from_amplitudes(vec![
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.8),
        ])
        .unwrap();
        assert!(matches!(bell_from_computational(&s), Err(Error::RebitViolation(_))));
        assert!(matches!(bell_from_computational(&basis_state(1, 0).unwrap()), Err(Error::NotTwoQubit(1))));
    }

    #[test]
    fn computational_from_bell_examples() {
        let s = computational_from_bell(&bell(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(s, StateVector::from_real(&[0.0, -H, H, 0.0]).unwrap());

        // |1> ⊗ (|0> + |1>)/√2, from summing the four kets by hand
        let s = computational_from_bell(&bell(0.5, 0.5, 0.5, 0.5)).unwrap();
        let expected = StateVector::from_real(&[0.0, 0.0, H, H]).unwrap();
        assert!(s.same_ray(&expected, 1e-15));

        let s = computational_from_bell(&bell(0.0, 0.0, -H, H)).unwrap();
        assert!(s.same_ray(&basis_state(2, 0).unwrap(), 1e-15));

        assert!(matches!(
            computational_from_bell(&BellCoefficients { alpha: 1.0, beta: 1.0, gamma: 0.0, eta: 0.0 }),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn visibility_examples() {
        let plus_zero = StateVector::from_real(&[H, 0.0, H, 0.0]).unwrap();
        assert!((visibility(&plus_zero, Particle::First).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(visibility(&basis_state(2, 0).unwrap(), Particle::First).unwrap(), 0.0);
        let s = computational_from_bell(&bell(0.8, 0.6, 0.0, 0.0)).unwrap();
        assert!(visibility(&s, Particle::First).unwrap() < 1e-15);
    }

    #[test]
    fn predictability_examples() {
        let s = StateVector::from_real(&[0.6, 0.8, 0.0, 0.0]).unwrap();
        assert_eq!(predictability(&s, Particle::First).unwrap(), 1.0);
        let plus_zero = StateVector::from_real(&[H, 0.0, H, 0.0]).unwrap();
        assert!(predictability(&plus_zero, Particle::First).unwrap() < 1e-15);
        let s = computational_from_bell(&bell(0.8, 0.6, 0.0, 0.0)).unwrap();
        assert!((predictability(&s, Particle::First).unwrap() - 0.96).abs() < 1e-15);
    }

    #[test]
    fn concurrence_examples() {
        let psi_minus = StateVector::from_real(&BELL_KETS[0]).unwrap();
        assert!((concurrence_pure(&psi_minus).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(concurrence_pure(&basis_state(2, 0).unwrap()).unwrap(), 0.0);
        let s = computational_from_bell(&bell(0.8, 0.6, 0.0, 0.0)).unwrap();
        assert!((concurrence_pure(&s).unwrap() - 0.28).abs() < 1e-15);
    }

    #[test]
    fn concurrence_uses_unconjugated_form() {
        // (|00> + i|11>)/√2 is maximally entangled; a conjugating form would give 0.
        let s = StateVector::from_amplitudes(vec![
            Complex64::new(H, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, H),
        ])
        .unwrap();
        assert!((concurrence_pure(&s).unwrap() - 1.0).abs() < 1e-15);
        assert!(triality_residual(&s, Particle::First).unwrap().abs() < 1e-15);
    }

    #[test]
    fn observables_from_bell_examples() {
        let r = observables_from_bell(&bell(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(r, ComplementarityReport::from_parts(1.0, [0.0; 2], [0.0; 2]));
        assert_eq!(r.triality_residual_1, 0.0);

        let r = observables_from_bell(&bell(0.5, 0.5, 0.5, 0.5)).unwrap();
        assert_eq!(r.concurrence, 0.0);
        assert_eq!((r.predictability_1, r.visibility_1), (1.0, 0.0));
        assert_eq!((r.predictability_2, r.visibility_2), (0.0, 1.0));

        let r = observables_from_bell(&bell(0.8, 0.6, 0.0, 0.0)).unwrap();
        assert!((r.concurrence - 0.28).abs() < 1e-15);
        assert!((r.predictability_1 - 0.96).abs() < 1e-15);
        assert_eq!(r.visibility_1, 0.0);
        assert!(r.triality_residual_1.abs() < 1e-15);
    }

    #[test]
    fn single_partitedness_examples() {
        let product = StateVector::from_real(&[0.48, 0.64, 0.36, 0.48]).unwrap();
        for k in Particle::BOTH {
            assert!((single_partitedness(&product, k).unwrap() - 1.0).abs() < 1e-14);
        }
        let phi_plus = StateVector::from_real(&BELL_KETS[3]).unwrap();
        assert!(single_partitedness(&phi_plus, Particle::First).unwrap() < 1e-15);
        let s = computational_from_bell(&bell(0.8, 0.6, 0.0, 0.0)).unwrap();
        assert!((single_partitedness(&s, Particle::First).unwrap() - 0.9216).abs() < 1e-14);
    }

    #[test]
    fn triality_examples() {
        for ket in BELL_KETS {
            let s = StateVector::from_real(&ket).unwrap();
            for k in Particle::BOTH {
                assert!(triality_residual(&s, k).unwrap().abs() < 1e-15);
            }
        }
        let s = computational_from_bell(&bell(0.8, 0.6, 0.0, 0.0)).unwrap();
        assert!(triality_residual(&s, Particle::First).unwrap().abs() < 1e-14);
    }

    #[test]
    fn variance_sum_examples() {
        assert!((variance_sum(&basis_state(2, 0).unwrap()).unwrap() - 2.0).abs() < 1e-15);
        let psi_minus = StateVector::from_real(&BELL_KETS[0]).unwrap();
        assert!((variance_sum(&psi_minus).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn particle_labels() {
        assert_eq!(Particle::from_label(1), Some(Particle::First));
        assert_eq!(Particle::from_label(2).map(Particle::qubit), Some(1));
        assert_eq!(Particle::from_label(3), None);
    }
}
