//! Complex arithmetic for the 3-qubit multiplexer: 2x2 coin blocks,
//! 8-amplitude statevectors and computational-basis measurement.
//!
//! Basis index `k = 4*b2 + 2*b1 + b0`, where `b2 b1` encode the history
//! (outcome at t-2, outcome at t-1) and `b0` is the coin qubit. A `0` bit
//! means gain, so history `j` (0-based, GG, GL, LG, LL) occupies the
//! amplitude pair `(2j, 2j+1)` and the gaining outcomes are the even indices.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Amplitude = Complex64;

/// Tolerance on `max |U^dag U - I|` for a block to count as unitary.
pub const UNITARY_TOL: f64 = 1e-12;

/// Largest norm drift `apply` silently renormalizes away.
pub const NORM_DRIFT_TOL: f64 = 1e-9;

/// Indices of `|000>, |010>, |100>, |110>`: coin qubit reads gain.
pub const GAIN_INDICES: [usize; 4] = [0, 2, 4, 6];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// How `apply` treats an operator that fails the unitarity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitarityMode {
    /// Reject non-unitary operators.
    #[default]
    Strict,
    /// Apply anyway and renormalize the output. Results obtained this way
    /// are not quantum evolutions.
    Permissive,
}

/// A single-qubit operator, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinOperator {
    m: [[Complex64; 2]; 2],
}

impl CoinOperator {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        if m.iter().flatten().all(|z| is_finite(*z)) {
            Ok(Self { m })
        } else {
            Err(Error::InvalidOperand(format!(
                "non-finite entry in coin operator {m:?}"
            )))
        }
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Result<Self> {
        Self::new(m.map(|row| row.map(|x| Complex64::new(x, 0.0))))
    }

    pub fn identity() -> Self {
        Self {
            m: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub fn adjoint(&self) -> Self {
        let m = self.m;
        Self {
            m: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        let (a, b) = (self.m, rhs.m);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { m: out }
    }

    pub fn determinant(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Largest entrywise modulus of `U^dag U - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let gram = self.adjoint().matmul(self);
        let mut worst = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((gram.m[i][j] - target).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> Result<bool> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidOperand(format!("tolerance must be positive, got {tol}")));
        }
        Ok(self.unitarity_deviation() <= tol)
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    fn scale(&self, g: Complex64) -> Self {
        Self {
            m: self.m.map(|row| row.map(|z| z * g)),
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut m = self.m;
        for (i, row) in m.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z += rhs.m[i][j];
            }
        }
        Self { m }
    }
}

/// Free-function form of [`CoinOperator::is_unitary`].
pub fn is_unitary(op: &CoinOperator, tol: f64) -> Result<bool> {
    op.is_unitary(tol)
}

/// Entrywise `g1*b1 + g2*b2`. Unitarity of the result is not checked here.
pub fn superpose_blocks(
    b1: &CoinOperator,
    b2: &CoinOperator,
    g1: Complex64,
    g2: Complex64,
) -> CoinOperator {
    b1.scale(g1).add(&b2.scale(g2))
}

/// Block-diagonal 8x8 operator: block `j` acts on the coin qubit when the
/// history qubits read `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Multiplexer {
    blocks: [CoinOperator; 4],
}

impl Multiplexer {
    pub fn assemble(blocks: [CoinOperator; 4]) -> Self {
        Self { blocks }
    }

    pub fn identity() -> Self {
        Self::assemble([CoinOperator::identity(); 4])
    }

    pub fn blocks(&self) -> &[CoinOperator; 4] {
        &self.blocks
    }

    pub fn block(&self, history: usize) -> &CoinOperator {
        &self.blocks[history]
    }

    pub fn unitarity_deviation(&self) -> f64 {
        self.blocks
            .iter()
            .map(CoinOperator::unitarity_deviation)
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> Result<bool> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidOperand(format!("tolerance must be positive, got {tol}")));
        }
        Ok(self.unitarity_deviation() <= tol)
    }

    /// Dense matrix form, mostly for display and tests.
    pub fn to_dense(&self) -> [[Complex64; 8]; 8] {
        let mut out = [[ZERO; 8]; 8];
        for (j, block) in self.blocks.iter().enumerate() {
            for r in 0..2 {
                for c in 0..2 {
                    out[2 * j + r][2 * j + c] = block.m[r][c];
                }
            }
        }
        out
    }

    /// Block-diagonal matrix-vector product.
    ///
    /// The input may carry a norm drift of up to [`NORM_DRIFT_TOL`], which is
    /// renormalized before the product; anything larger is an error.
    pub fn apply(&self, state: &QuantumState, mode: UnitarityMode) -> Result<QuantumState> {
        let norm = state.norm_sqr().sqrt();
        let drift = (norm - 1.0).abs();
        if drift > NORM_DRIFT_TOL {
            return Err(Error::NormDrift {
                drift,
                limit: NORM_DRIFT_TOL,
            });
        }
        let deviation = self.unitarity_deviation();
        let unitary = deviation <= UNITARY_TOL;
        if !unitary && mode == UnitarityMode::Strict {
            return Err(Error::UnitarityViolation { deviation });
        }

        let input = state.amps.map(|z| z / norm);
        let mut out = [ZERO; 8];
        for (j, block) in self.blocks.iter().enumerate() {
            let [lo, hi] = block.apply([input[2 * j], input[2 * j + 1]]);
            out[2 * j] = lo;
            out[2 * j + 1] = hi;
        }
        if unitary {
            Ok(QuantumState { amps: out })
        } else {
            QuantumState::normalized(out)
        }
    }
}

/// Free-function form of [`Multiplexer::assemble`].
pub fn assemble_multiplexer(blocks: [CoinOperator; 4]) -> Multiplexer {
    Multiplexer::assemble(blocks)
}

/// Amplitudes of a 3-qubit state over `|000>..|111>`.
///
/// States built by [`QuantumState::normalized`] or produced by a unitary
/// multiplexer have unit norm; [`QuantumState::from_amplitudes`] keeps the
/// raw scale, which only matters to `apply`'s drift check since measurement
/// divides by the squared norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumState {
    amps: [Complex64; 8],
}

impl QuantumState {
    pub fn from_amplitudes(amps: [Complex64; 8]) -> Result<Self> {
        if !amps.iter().all(|z| is_finite(*z)) {
            return Err(Error::InvalidOperand("non-finite amplitude".into()));
        }
        if amps.iter().all(|z| z.norm_sqr() == 0.0) {
            return Err(Error::DegenerateState("all amplitudes are zero"));
        }
        Ok(Self { amps })
    }

    pub fn normalized(amps: [Complex64; 8]) -> Result<Self> {
        let state = Self::from_amplitudes(amps)?;
        let norm = state.norm_sqr().sqrt();
        Ok(Self {
            amps: state.amps.map(|z| z / norm),
        })
    }

    pub fn from_real(amps: [f64; 8]) -> Result<Self> {
        Self::from_amplitudes(amps.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn basis(index: usize) -> Self {
        assert!(index < 8, "basis index {index} out of range");
        let mut amps = [ZERO; 8];
        amps[index] = ONE;
        Self { amps }
    }

    /// `(|000> + |111>)/sqrt(2)`.
    pub fn maximally_entangled() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut amps = [ZERO; 8];
        amps[0] = h;
        amps[7] = h;
        Self { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Exact outcome distribution: `|a_k|^2 / sum |a|^2`.
    pub fn measure(&self) -> OutcomeDistribution {
        let total = self.norm_sqr();
        OutcomeDistribution {
            probabilities: self.amps.map(|z| z.norm_sqr() / total),
        }
    }
}

pub fn measure(state: &QuantumState) -> OutcomeDistribution {
    state.measure()
}

/// Probability mass on the gaining basis states.
pub fn gain_probability_of(state: &QuantumState) -> f64 {
    state.measure().gain()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeDistribution {
    probabilities: [f64; 8],
}

impl OutcomeDistribution {
    pub fn probabilities(&self) -> &[f64; 8] {
        &self.probabilities
    }

    pub fn gain(&self) -> f64 {
        GAIN_INDICES.iter().map(|&k| self.probabilities[k]).sum()
    }

    pub fn loss(&self) -> f64 {
        GAIN_INDICES.iter().map(|&k| self.probabilities[k + 1]).sum()
    }

    /// Marginal over the history qubits.
    pub fn history_marginal(&self) -> [f64; 4] {
        std::array::from_fn(|j| self.probabilities[2 * j] + self.probabilities[2 * j + 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    fn type1_block(p: f64, eta: Complex64) -> CoinOperator {
        let (s, t) = (p.sqrt(), (1.0 - p).sqrt());
        CoinOperator::new([[c(s, 0.0), -eta.conj() * t], [eta * t, c(s, 0.0)]]).unwrap()
    }

    #[test]
    fn identity_is_unitary_and_shear_is_not() {
        assert!(CoinOperator::identity().is_unitary(1e-12).unwrap());
        let shear = CoinOperator::from_real([[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(!shear.is_unitary(1e-12).unwrap());
    }

    #[test]
    fn embedded_block_is_unitary() {
        let eta = Complex64::from_polar(1.0, PI / 3.0);
        let q = type1_block(0.3, eta);
        assert!(is_unitary(&q, 1e-12).unwrap());
        assert!((q.determinant() - ONE).norm() < 1e-12);
    }

    #[test]
    fn is_unitary_rejects_bad_tolerance() {
        assert!(CoinOperator::identity().is_unitary(0.0).is_err());
        assert!(CoinOperator::identity().is_unitary(f64::NAN).is_err());
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let err = CoinOperator::from_real([[f64::NAN, 0.0], [0.0, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::InvalidOperand(_)));
        assert!(QuantumState::from_real([f64::INFINITY, 0., 0., 0., 0., 0., 0., 0.]).is_err());
    }

    #[test]
    fn identity_multiplexer_preserves_state() {
        let s = QuantumState::normalized([c(1.0, 2.0), c(0.0, -1.0), ZERO, c(0.5, 0.0), ZERO, ZERO, c(0.1, 0.1), ONE]).unwrap();
        let out = Multiplexer::identity().apply(&s, UnitarityMode::Strict).unwrap();
        for k in 0..8 {
            assert!(close(out.amplitude(k), s.amplitude(k)));
        }
    }

    #[test]
    fn single_flip_block_moves_000_to_001() {
        let flip = CoinOperator::from_real([[0.0, -1.0], [1.0, 0.0]]).unwrap();
        let id = CoinOperator::identity();
        let mux = assemble_multiplexer([flip, id, id, id]);
        let out = mux.apply(&QuantumState::basis(0), UnitarityMode::Strict).unwrap();
        assert!(close(out.amplitude(1), ONE));
        assert!((out.measure().probabilities()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_000_picks_out_first_block() {
        let eta = Complex64::from_polar(1.0, PI / 3.0);
        let ps = [0.695, 0.245, 0.245, 0.895];
        let mux = Multiplexer::assemble(ps.map(|p| type1_block(p, eta)));
        let out = mux.apply(&QuantumState::basis(0), UnitarityMode::Strict).unwrap();
        assert!(close(out.amplitude(0), c(0.695_f64.sqrt(), 0.0)));
        assert!(close(out.amplitude(1), eta * 0.305_f64.sqrt()));
        for k in 2..8 {
            assert_eq!(out.amplitude(k), ZERO);
        }
    }

    #[test]
    fn maximally_entangled_input_matches_block_columns() {
        // generic SU(2) blocks [[a, -conj b], [b, conj a]]
        let blocks: [CoinOperator; 4] = std::array::from_fn(|j| {
            let theta = 0.3 + j as f64;
            let a = Complex64::from_polar(theta.cos(), 0.7 * j as f64);
            let b = Complex64::from_polar(theta.sin(), -0.4 + j as f64);
            CoinOperator::new([[a, -b.conj()], [b, a.conj()]]).unwrap()
        });
        let mux = Multiplexer::assemble(blocks);
        let out = mux
            .apply(&QuantumState::maximally_entangled(), UnitarityMode::Strict)
            .unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (a1, b1) = (blocks[0].entry(0, 0), blocks[0].entry(1, 0));
        let (a4, b4) = (blocks[3].entry(0, 0), blocks[3].entry(1, 0));
        assert!(close(out.amplitude(0), a1 * h));
        assert!(close(out.amplitude(1), b1 * h));
        assert!(close(out.amplitude(6), -b4.conj() * h));
        assert!(close(out.amplitude(7), a4.conj() * h));
        for k in 2..6 {
            assert_eq!(out.amplitude(k), ZERO);
        }
    }

    #[test]
    fn measurement_normalizes_by_ratio() {
        let s = QuantumState::from_real([1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let d = s.measure();
        assert_eq!(d.probabilities()[0], 0.5);
        assert_eq!(d.probabilities()[1], 0.5);
        assert_eq!(measure(&QuantumState::basis(0)).probabilities()[0], 1.0);
    }

    #[test]
    fn zero_state_is_degenerate() {
        let err = QuantumState::from_real([0.0; 8]).unwrap_err();
        assert!(matches!(err, Error::DegenerateState(_)));
    }

    #[test]
    fn gain_probability_of_basis_states() {
        assert_eq!(gain_probability_of(&QuantumState::basis(0)), 1.0);
        assert_eq!(gain_probability_of(&QuantumState::basis(1)), 0.0);
        assert_eq!(gain_probability_of(&QuantumState::basis(6)), 1.0);
    }

    #[test]
    fn fair_coins_uniform_history_measure_one_eighth_everywhere() {
        let eta = Complex64::from_polar(1.0, PI / 3.0);
        let mux = Multiplexer::assemble([type1_block(0.5, eta); 4]);
        let init = QuantumState::from_real([0.5, 0.0, 0.5, 0.0, 0.5, 0.0, 0.5, 0.0]).unwrap();
        let out = mux.apply(&init, UnitarityMode::Strict).unwrap();
        for p in out.measure().probabilities() {
            assert!((p - 0.125).abs() < 1e-15);
        }
    }

    #[test]
    fn strict_mode_rejects_non_unitary() {
        let shear = CoinOperator::from_real([[1.0, 1.0], [0.0, 1.0]]).unwrap();
        let id = CoinOperator::identity();
        let mux = Multiplexer::assemble([shear, id, id, id]);
        let s = QuantumState::from_real([0.6, 0.8, 0., 0., 0., 0., 0., 0.]).unwrap();
        assert!(matches!(
            mux.apply(&s, UnitarityMode::Strict),
            Err(Error::UnitarityViolation { .. })
        ));
        let out = mux.apply(&s, UnitarityMode::Permissive).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_drift_renormalized_large_drift_rejected() {
        let eps = 1e-10;
        let s = QuantumState::from_real([1.0 + eps, 0., 0., 0., 0., 0., 0., 0.]).unwrap();
        let out = Multiplexer::identity().apply(&s, UnitarityMode::Strict).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-15);

        let s = QuantumState::from_real([1.001, 0., 0., 0., 0., 0., 0., 0.]).unwrap();
        assert!(matches!(
            Multiplexer::identity().apply(&s, UnitarityMode::Strict),
            Err(Error::NormDrift { .. })
        ));
    }

    #[test]
    fn apply_keeps_history_pairs_separate() {
        let eta = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let mux = Multiplexer::assemble([0.1, 0.4, 0.7, 0.9].map(|p| type1_block(p, eta)));
        for k in 0..8 {
            let out = mux.apply(&QuantumState::basis(k), UnitarityMode::Strict).unwrap();
            let pair = k / 2;
            for (i, z) in out.amplitudes().iter().enumerate() {
                if i / 2 != pair {
                    assert_eq!(*z, ZERO, "basis {k} leaked into index {i}");
                }
            }
        }
    }

    #[test]
    fn dense_form_is_block_diagonal() {
        let eta = Complex64::from_polar(1.0, PI / 3.0);
        let mux = Multiplexer::assemble([0.2, 0.4, 0.6, 0.8].map(|p| type1_block(p, eta)));
        let dense = mux.to_dense();
        for (r, row) in dense.iter().enumerate() {
            for (col, z) in row.iter().enumerate() {
                if r / 2 != col / 2 {
                    assert_eq!(*z, ZERO);
                } else {
                    assert_eq!(*z, mux.block(r / 2).entry(r % 2, col % 2));
                }
            }
        }
    }

    #[test]
    fn superpose_blocks_trivial_weights() {
        let b1 = type1_block(0.3, ONE);
        let b2 = type1_block(0.8, ONE);
        assert_eq!(superpose_blocks(&b1, &b2, ONE, ZERO), b1);
    }

    #[test]
    fn same_type_fair_coins_do_not_superpose_unitarily() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let b = type1_block(0.5, ONE);
        let s = superpose_blocks(&b, &b, c(h, 0.0), c(h, 0.0));
        // column norm is 1 + 2 g1 g2 (sqrt(ab) + sqrt((1-a)(1-b))) = 2
        let col_norm = s.entry(0, 0).norm_sqr() + s.entry(1, 0).norm_sqr();
        assert!((col_norm - 2.0).abs() < 1e-12);
        assert!(!s.is_unitary(1e-12).unwrap());
    }

    #[test]
    fn outcome_gain_and_loss_sum_to_one() {
        let s = QuantumState::from_real([0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]).unwrap();
        let d = s.measure();
        assert!((d.gain() + d.loss() - 1.0).abs() < 1e-12);
        let marginal: f64 = d.history_marginal().iter().sum();
        assert!((marginal - 1.0).abs() < 1e-12);
    }
}
