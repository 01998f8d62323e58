//! Dense statevectors for small qubit registers.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{ABSENT_BRANCH, MAX_QUBITS, NORM_TOL, UNITARITY_TOL};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A general 2x2 complex operator, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Operator2(pub [[Complex64; 2]; 2]);

impl Operator2 {
    pub const IDENTITY: Operator2 = Operator2([[ONE, ZERO], [ZERO, ONE]]);
    pub const PAULI_X: Operator2 = Operator2([[ZERO, ONE], [ONE, ZERO]]);
    pub const PAULI_Y: Operator2 = Operator2([[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]]);
    pub const PAULI_Z: Operator2 = Operator2([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]]);
    /// Raising operator `|0><1|`. Not unitary; only used inside averages.
    pub const SIGMA_PLUS: Operator2 = Operator2([[ZERO, ONE], [ZERO, ZERO]]);

    pub fn adjoint(&self) -> Operator2 {
        let m = &self.0;
        Operator2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn matmul(&self, rhs: &Operator2) -> Operator2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Operator2(out)
    }

    /// Largest elementwise deviation of `self` from `other`.
    pub fn max_deviation(&self, other: &Operator2) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise deviation of `U^dagger U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint().matmul(self).max_deviation(&Operator2::IDENTITY)
    }
}

/// A unitary single-qubit gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Operator2", into = "Operator2")]
pub struct SingleQubitGate(Operator2);

impl SingleQubitGate {
    pub fn new(op: Operator2) -> Result<Self> {
        if op.0.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("gate matrix"));
        }
        let defect = op.unitarity_defect();
        if defect > UNITARITY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(SingleQubitGate(op))
    }

    pub fn identity() -> Self {
        SingleQubitGate(Operator2::IDENTITY)
    }

    pub fn matrix(&self) -> &Operator2 {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        SingleQubitGate(self.0.adjoint())
    }

    pub fn then(&self, next: &SingleQubitGate) -> Self {
        SingleQubitGate(next.0.matmul(&self.0))
    }
}

impl TryFrom<Operator2> for SingleQubitGate {
    type Error = Error;
    fn try_from(op: Operator2) -> Result<Self> {
        SingleQubitGate::new(op)
    }
}

impl From<SingleQubitGate> for Operator2 {
    fn from(g: SingleQubitGate) -> Operator2 {
        g.0
    }
}

/// Single-qubit Pauli factor of a Pauli string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn operator(self) -> Operator2 {
        match self {
            Pauli::I => Operator2::IDENTITY,
            Pauli::X => Operator2::PAULI_X,
            Pauli::Y => Operator2::PAULI_Y,
            Pauli::Z => Operator2::PAULI_Z,
        }
    }
}

/// Normalized amplitude vector of an `n`-qubit register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps `amplitudes`, which must already be normalized within [`NORM_TOL`].
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("amplitudes"));
        }
        let norm = squared_norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(StateVector { n_qubits, amplitudes })
    }

    /// Wraps `amplitudes` after dividing by their norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("amplitudes"));
        }
        let norm = squared_norm(&amplitudes);
        if norm == 0.0 {
            return Err(Error::NotNormalized(norm));
        }
        let scale = norm.sqrt().recip();
        amplitudes.iter_mut().for_each(|z| *z *= scale);
        Ok(StateVector { n_qubits, amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::from_amplitudes(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        squared_norm(&self.amplitudes)
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|<self|other>|`, equal to 1 exactly when the states agree up to a global phase.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        if self.n_qubits != other.n_qubits {
            return 0.0;
        }
        self.inner(other).norm()
    }

    pub fn same_ray(&self, other: &StateVector, tol: f64) -> bool {
        (1.0 - self.overlap(other)).abs() <= tol
    }

    /// `self ⊗ other`, with `self` on the leading (most significant) qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n_qubits = self.n_qubits + other.n_qubits;
        if n_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(n_qubits));
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(StateVector { n_qubits, amplitudes })
    }

    /// True when every amplitude is real after removing the phase of the
    /// largest-magnitude amplitude.
    pub fn is_real_up_to_phase(&self, tol: f64) -> bool {
        self.dephased().iter().all(|z| z.im.abs() <= tol)
    }

    /// Amplitudes multiplied by the conjugate phase of the largest one.
    pub(crate) fn dephased(&self) -> Vec<Complex64> {
        let pivot = self
            .amplitudes
            .iter()
            .copied()
            .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
            .unwrap_or(ONE);
        let phase = if pivot.norm() > 0.0 { pivot.conj() / pivot.norm() } else { ONE };
        self.amplitudes.iter().map(|z| z * phase).collect()
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitIndex { qubit, n_qubits: self.n_qubits });
        }
        Ok(())
    }

    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (index, amp) in self.amplitudes.iter().enumerate() {
            if amp.norm_sqr() < 1e-24 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)|{}>", amp.re, amp.im, bit_label(index, self.n_qubits))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn squared_norm(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(Complex64::norm_sqr).sum()
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::AmplitudeLength(len));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::QubitCount(n));
    }
    Ok(n)
}

/// Binary label of `bits` using `width` characters, most significant first.
pub fn bit_label(bits: usize, width: usize) -> String {
    (0..width)
        .map(|i| if bits >> (width - 1 - i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Inverse of [`bit_label`].
pub fn parse_bit_label(label: &str) -> Result<usize> {
    if label.is_empty() || label.len() > usize::BITS as usize {
        return Err(Error::OutcomeLabel(label.to_string()));
    }
    label.chars().try_fold(0usize, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok(acc << 1 | 1),
        _ => Err(Error::OutcomeLabel(label.to_string())),
    })
}

/// Computational basis state `|index>` of an `n_qubits` register.
pub fn basis_state(n_qubits: usize, index: usize) -> Result<StateVector> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::QubitCount(n_qubits));
    }
    let dim = 1usize << n_qubits;
    if index >= dim {
        return Err(Error::BasisIndex { index, n_qubits });
    }
    let mut amplitudes = vec![ZERO; dim];
    amplitudes[index] = ONE;
    Ok(StateVector { n_qubits, amplitudes })
}

/// Rotation `exp(-i σ·θ / 2)` about the axis of `axis_angle` by its length.
pub fn rotation_gate(axis_angle: [f64; 3]) -> Result<SingleQubitGate> {
    if axis_angle.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("rotation angle"));
    }
    let [x, y, z] = axis_angle;
    let angle = (x * x + y * y + z * z).sqrt();
    if angle == 0.0 {
        return Ok(SingleQubitGate::identity());
    }
    let (nx, ny, nz) = (x / angle, y / angle, z / angle);
    let (s, c) = (angle / 2.0).sin_cos();
    let op = Operator2([
        [Complex64::new(c, -s * nz), Complex64::new(-s * ny, -s * nx)],
        [Complex64::new(s * ny, -s * nx), Complex64::new(c, s * nz)],
    ]);
    SingleQubitGate::new(op)
}

/// Applies `gate` to qubit `target`, identity elsewhere.
pub fn apply_single(state: &StateVector, gate: &SingleQubitGate, target: usize) -> Result<StateVector> {
    state.check_qubit(target)?;
    let amplitudes = apply_operator_raw(state, gate.matrix(), target);
    Ok(StateVector { n_qubits: state.n_qubits, amplitudes })
}

fn apply_operator_raw(state: &StateVector, op: &Operator2, target: usize) -> Vec<Complex64> {
    apply_operator_to(&state.amplitudes, state.mask(target), op)
}

fn apply_operator_to(amplitudes: &[Complex64], mask: usize, op: &Operator2) -> Vec<Complex64> {
    let m = &op.0;
    let mut out = amplitudes.to_vec();
    for lo in (0..amplitudes.len()).filter(|i| i & mask == 0) {
        let hi = lo | mask;
        let (a0, a1) = (amplitudes[lo], amplitudes[hi]);
        out[lo] = m[0][0] * a0 + m[0][1] * a1;
        out[hi] = m[1][0] * a0 + m[1][1] * a1;
    }
    out
}

/// Flips `target` on every basis state whose `control` bit is set.
pub fn apply_cnot(state: &StateVector, control: usize, target: usize) -> Result<StateVector> {
    state.check_qubit(control)?;
    state.check_qubit(target)?;
    if control == target {
        return Err(Error::SameQubit(control));
    }
    let (cmask, tmask) = (state.mask(control), state.mask(target));
    let mut amplitudes = state.amplitudes.clone();
    for i in (0..amplitudes.len()).filter(|i| i & cmask != 0 && i & tmask == 0) {
        amplitudes.swap(i, i | tmask);
    }
    Ok(StateVector { n_qubits: state.n_qubits, amplitudes })
}

/// `O|ψ>` for a tensor product of 2x2 factors, unnormalized.
pub fn apply_operator_string(state: &StateVector, factors: &[(usize, Operator2)]) -> Result<Vec<Complex64>> {
    let mut amplitudes = state.amplitudes.clone();
    for &(qubit, ref op) in factors {
        state.check_qubit(qubit)?;
        amplitudes = apply_operator_to(&amplitudes, state.mask(qubit), op);
    }
    Ok(amplitudes)
}

/// `<ψ|O|ψ>` for a tensor product of 2x2 factors. Factors on the same qubit
/// are applied right to left in list order.
pub fn operator_average(state: &StateVector, factors: &[(usize, Operator2)]) -> Result<Complex64> {
    let image = apply_operator_string(state, factors)?;
    Ok(state.amplitudes.iter().zip(&image).map(|(a, b)| a.conj() * b).sum())
}

fn pauli_factors(pauli_string: &[(usize, Pauli)]) -> Result<Vec<(usize, Operator2)>> {
    let mut seen = 0usize;
    let mut factors = Vec::with_capacity(pauli_string.len());
    for &(qubit, p) in pauli_string {
        if qubit < usize::BITS as usize {
            if seen & (1 << qubit) != 0 {
                return Err(Error::DuplicateQubit(qubit));
            }
            seen |= 1 << qubit;
        }
        factors.push((qubit, p.operator()));
    }
    Ok(factors)
}

/// Real expectation value of a Pauli string.
pub fn expectation(state: &StateVector, pauli_string: &[(usize, Pauli)]) -> Result<f64> {
    let avg = operator_average(state, &pauli_factors(pauli_string)?)?;
    if avg.im.abs() > crate::HERMITIAN_TOL {
        return Err(Error::NonHermitian(avg.im));
    }
    Ok(avg.re)
}

/// `O|ψ>` for a Pauli string.
pub fn apply_pauli_string(state: &StateVector, pauli_string: &[(usize, Pauli)]) -> Result<Vec<Complex64>> {
    apply_operator_string(state, &pauli_factors(pauli_string)?)
}

/// One outcome of a projective measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    /// Measured bits, first measured qubit most significant.
    pub bits: usize,
    pub probability: f64,
    pub post_state: StateVector,
}

/// Born-rule outcome distribution over a set of measured qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub measured: Vec<usize>,
    /// Outcomes in increasing bit order. Outcomes with probability below
    /// [`ABSENT_BRANCH`] are omitted.
    pub entries: Vec<Outcome>,
}

impl OutcomeDistribution {
    pub fn width(&self) -> usize {
        self.measured.len()
    }

    pub fn probability(&self, bits: usize) -> f64 {
        self.entries.iter().find(|o| o.bits == bits).map_or(0.0, |o| o.probability)
    }

    pub fn get(&self, bits: usize) -> Option<&Outcome> {
        self.entries.iter().find(|o| o.bits == bits)
    }

    pub fn total_probability(&self) -> f64 {
        self.entries.iter().map(|o| o.probability).sum()
    }
}

/// Projective measurement of `targets` in the computational basis.
pub fn measure(state: &StateVector, targets: &[usize]) -> Result<OutcomeDistribution> {
    let mut seen = Vec::with_capacity(targets.len());
    for &q in targets {
        state.check_qubit(q)?;
        if seen.contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
        seen.push(q);
    }
    let width = targets.len();
    let masks: Vec<usize> = targets.iter().map(|&q| state.mask(q)).collect();
    let outcome_of = |index: usize| {
        masks
            .iter()
            .fold(0usize, |acc, &m| acc << 1 | usize::from(index & m != 0))
    };

    let mut probabilities = vec![0.0; 1 << width];
    for (index, amp) in state.amplitudes.iter().enumerate() {
        probabilities[outcome_of(index)] += amp.norm_sqr();
    }
    let total: f64 = probabilities.iter().sum();

    let entries = probabilities
        .iter()
        .enumerate()
        .filter(|(_, &p)| p / total >= ABSENT_BRANCH)
        .map(|(bits, &p)| {
            let scale = p.sqrt().recip();
            let amplitudes = state
                .amplitudes
                .iter()
                .enumerate()
                .map(|(i, a)| if outcome_of(i) == bits { a * scale } else { ZERO })
                .collect();
            Outcome {
                bits,
                probability: p / total,
                post_state: StateVector { n_qubits: state.n_qubits, amplitudes },
            }
        })
        .collect();
    Ok(OutcomeDistribution { measured: targets.to_vec(), entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus() -> StateVector {
        StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap()
    }

    /// exp(-i A) by Taylor series, independent of the closed form.
    fn expm_minus_i(a: &Operator2) -> Operator2 {
        let mut term = Operator2::IDENTITY;
        let mut sum = Operator2::IDENTITY;
        for k in 1..40 {
            let scaled = Operator2(term.0.map(|row| row.map(|z| z * c(0.0, -1.0) / k as f64)));
            term = scaled.matmul(a);
            for r in 0..2 {
                for col in 0..2 {
                    sum.0[r][col] += term.0[r][col];
                }
            }
        }
        sum
    }

    fn half_sigma_dot(theta: [f64; 3]) -> Operator2 {
        let mut out = Operator2([[ZERO; 2]; 2]);
        for (k, p) in [Operator2::PAULI_X, Operator2::PAULI_Y, Operator2::PAULI_Z].iter().enumerate() {
            for r in 0..2 {
                for col in 0..2 {
                    out.0[r][col] += p.0[r][col] * theta[k] / 2.0;
                }
            }
        }
        out
    }

    #[test]
    fn basis_states_follow_msb_ordering() {
        assert_eq!(basis_state(1, 0).unwrap().amplitudes(), &[ONE, ZERO]);
        assert_eq!(basis_state(2, 3).unwrap().amplitudes(), &[ZERO, ZERO, ZERO, ONE]);
        let s = basis_state(3, 4).unwrap();
        assert_eq!(s.probability(0b100), 1.0);
        // qubit 0 is set
        let m = measure(&s, &[0]).unwrap();
        assert_eq!(m.entries.len(), 1);
        assert_eq!(m.entries[0].bits, 1);
    }

    #[test]
    fn basis_state_rejects_bad_index() {
        assert_eq!(basis_state(2, 4), Err(Error::BasisIndex { index: 4, n_qubits: 2 }));
        assert!(matches!(basis_state(9, 0), Err(Error::QubitCount(9))));
        assert!(matches!(basis_state(0, 0), Err(Error::QubitCount(0))));
    }

    #[test]
    fn rotation_zero_is_identity() {
        assert_eq!(*rotation_gate([0.0; 3]).unwrap().matrix(), Operator2::IDENTITY);
    }

    #[test]
    fn rotation_about_x_quarter_turn() {
        let g = rotation_gate([FRAC_PI_2, 0.0, 0.0]).unwrap();
        let h = FRAC_1_SQRT_2;
        let expected = Operator2([[c(h, 0.0), c(0.0, -h)], [c(0.0, -h), c(h, 0.0)]]);
        assert!(g.matrix().max_deviation(&expected) < 1e-15);
    }

    #[test]
    fn rotation_about_y_quarter_turn() {
        let g = rotation_gate([0.0, FRAC_PI_2, 0.0]).unwrap();
        let h = FRAC_1_SQRT_2;
        let expected = Operator2([[c(h, 0.0), c(-h, 0.0)], [c(h, 0.0), c(h, 0.0)]]);
        assert!(g.matrix().max_deviation(&expected) < 1e-15);
        let out = apply_single(&basis_state(1, 0).unwrap(), &g, 0).unwrap();
        assert!(out.same_ray(&plus(), 1e-12));
    }

    #[test]
    fn rotation_matches_series_exponential() {
        for theta in [[0.3, -1.2, 0.7], [PI, 0.0, 0.0], [0.0, 0.0, -2.5], [1.0, 1.0, 1.0]] {
            let closed = rotation_gate(theta).unwrap();
            let series = expm_minus_i(&half_sigma_dot(theta));
            assert!(closed.matrix().max_deviation(&series) < 1e-12, "{theta:?}");
        }
    }

    #[test]
    fn rotation_rejects_non_finite() {
        assert_eq!(rotation_gate([f64::NAN, 0.0, 0.0]), Err(Error::NonFinite("rotation angle")));
        assert!(rotation_gate([0.0, f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn sigma_plus_is_not_a_gate() {
        assert!(matches!(SingleQubitGate::new(Operator2::SIGMA_PLUS), Err(Error::NotUnitary(_))));
        for p in [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z] {
            assert!(SingleQubitGate::new(p.operator()).is_ok());
        }
    }

    #[test]
    fn apply_single_examples() {
        let id = SingleQubitGate::identity();
        let s = basis_state(2, 0).unwrap();
        assert_eq!(apply_single(&s, &id, 1).unwrap(), s);

        let x = SingleQubitGate::new(Operator2::PAULI_X).unwrap();
        let out = apply_single(&basis_state(2, 0b10).unwrap(), &x, 0).unwrap();
        assert!((out.probability(0b00) - 1.0).abs() < 1e-15);

        assert_eq!(apply_single(&s, &id, 2), Err(Error::QubitIndex { qubit: 2, n_qubits: 2 }));
    }

    #[test]
    fn cnot_examples() {
        let s10 = basis_state(2, 0b10).unwrap();
        assert_eq!(apply_cnot(&s10, 0, 1).unwrap(), basis_state(2, 0b11).unwrap());
        let s01 = basis_state(2, 0b01).unwrap();
        assert_eq!(apply_cnot(&s01, 0, 1).unwrap(), s01);

        let h = FRAC_1_SQRT_2;
        let superposed = StateVector::from_real(&[h, 0.0, h, 0.0]).unwrap();
        let phi_plus = StateVector::from_real(&[h, 0.0, 0.0, h]).unwrap();
        assert_eq!(apply_cnot(&superposed, 0, 1).unwrap(), phi_plus);

        assert_eq!(apply_cnot(&s10, 1, 1), Err(Error::SameQubit(1)));
        assert!(apply_cnot(&s10, 0, 5).is_err());
    }

    #[test]
    fn expectation_examples() {
        let h = FRAC_1_SQRT_2;
        let psi_minus = StateVector::from_real(&[0.0, -h, h, 0.0]).unwrap();
        let yy = expectation(&psi_minus, &[(0, Pauli::Y), (1, Pauli::Y)]).unwrap();
        assert!((yy + 1.0).abs() < 1e-15);
        assert_eq!(expectation(&basis_state(1, 0).unwrap(), &[(0, Pauli::Z)]).unwrap(), 1.0);
        assert!((expectation(&plus(), &[(0, Pauli::X)]).unwrap() - 1.0).abs() < 1e-15);
        assert!((expectation(&plus(), &[]).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            expectation(&plus(), &[(0, Pauli::X), (0, Pauli::Z)]),
            Err(Error::DuplicateQubit(0))
        ));
    }

    #[test]
    fn sigma_plus_average_is_complex() {
        let plus_y = StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap();
        let avg = operator_average(&plus_y, &[(0, Operator2::SIGMA_PLUS)]).unwrap();
        assert!((avg - c(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn measure_examples() {
        let m = measure(&plus(), &[0]).unwrap();
        assert_eq!(m.entries.len(), 2);
        assert!((m.entries[0].probability - 0.5).abs() < 1e-15);
        assert_eq!(m.entries[0].post_state, basis_state(1, 0).unwrap());
        assert_eq!(m.entries[1].post_state, basis_state(1, 1).unwrap());

        let h = FRAC_1_SQRT_2;
        let phi_plus = StateVector::from_real(&[h, 0.0, 0.0, h]).unwrap();
        let m = measure(&phi_plus, &[0, 1]).unwrap();
        assert_eq!(m.entries.iter().map(|o| o.bits).collect::<Vec<_>>(), vec![0b00, 0b11]);
        assert!(m.entries.iter().all(|o| (o.probability - 0.5).abs() < 1e-15));

        let s11 = basis_state(2, 3).unwrap();
        let m = measure(&s11, &[1]).unwrap();
        assert_eq!(m.entries.len(), 1);
        assert_eq!(m.entries[0].bits, 1);
        assert_eq!(m.entries[0].probability, 1.0);
        assert_eq!(m.entries[0].post_state, s11);
    }

    #[test]
    fn measure_bit_order_follows_target_order() {
        let s = basis_state(3, 0b100).unwrap();
        assert_eq!(measure(&s, &[0, 2]).unwrap().entries[0].bits, 0b10);
        assert_eq!(measure(&s, &[2, 0]).unwrap().entries[0].bits, 0b01);
        assert!(matches!(measure(&s, &[1, 1]), Err(Error::DuplicateQubit(1))));
    }

    #[test]
    fn from_amplitudes_validation() {
        assert!(matches!(StateVector::from_real(&[1.0, 0.0, 0.0]), Err(Error::AmplitudeLength(3))));
        assert!(matches!(StateVector::from_real(&[1.0, 1.0]), Err(Error::NotNormalized(_))));
        assert!(matches!(StateVector::normalized(vec![ZERO; 4]), Err(Error::NotNormalized(_))));
        let s = StateVector::normalized(vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bit_labels_round_trip() {
        assert_eq!(bit_label(0b01, 2), "01");
        assert_eq!(parse_bit_label("10").unwrap(), 0b10);
        assert!(parse_bit_label("1x").is_err());
        assert!(parse_bit_label("").is_err());
    }

    #[test]
    fn tensor_places_left_factor_on_leading_qubits() {
        let s = basis_state(1, 1).unwrap().tensor(&basis_state(2, 0).unwrap()).unwrap();
        assert_eq!(s.probability(0b100), 1.0);
    }
}
