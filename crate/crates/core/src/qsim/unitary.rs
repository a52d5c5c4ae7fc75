use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{invalid, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A single-qubit gate stored as a row-major 2×2 complex matrix.
///
/// Column `j` is the image of the basis ket `|j⟩`.
#[derive(Clone, Copy, PartialEq)]
pub struct Unitary2x2 {
    m: [[Complex64; 2]; 2],
}

impl Unitary2x2 {
    /// Builds a gate from raw entries without checking unitarity.
    pub const fn from_rows(m: [[Complex64; 2]; 2]) -> Self {
        Self { m }
    }

    pub const fn identity() -> Self {
        Self::from_rows([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn pauli_x() -> Self {
        Self::from_rows([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn pauli_y() -> Self {
        Self::from_rows([[ZERO, -I], [I, ZERO]])
    }

    pub fn pauli_z() -> Self {
        Self::from_rows([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::from_rows([[h, h], [h, -h]])
    }

    /// Real rotation `|0⟩ ↦ cosθ|0⟩ + sinθ|1⟩`, `|1⟩ ↦ −sinθ|0⟩ + cosθ|1⟩`.
    ///
    /// This is `exp(−iσ_y θ)`, a Bloch-sphere turn by `2θ` about the y axis.
    /// Non-finite angles produce NaN entries; use [`make_rotation`] for checked input.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_rows([
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ])
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    pub fn rows(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::from_rows([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.m;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (*self * self.adjoint()).max_abs_diff(&Self::identity()) <= tol
    }

    /// True when `self = e^{iγ}·other` for some phase `γ`, entrywise within `tol`.
    pub fn equals_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        // tr(other† self) = 2 e^{iγ} when the two agree up to phase.
        let t = (other.adjoint() * *self).trace();
        if t.norm() < 1e-300 {
            return false;
        }
        let phase = t / t.norm();
        let mut shifted = *other;
        for row in shifted.m.iter_mut() {
            for z in row.iter_mut() {
                *z *= phase;
            }
        }
        self.max_abs_diff(&shifted) <= tol
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }
}

impl Mul for Unitary2x2 {
    type Output = Unitary2x2;

    fn mul(self, rhs: Unitary2x2) -> Unitary2x2 {
        let a = &self.m;
        let b = &rhs.m;
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, z) in row.iter_mut().enumerate() {
                *z = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Unitary2x2::from_rows(out)
    }
}

impl fmt::Debug for Unitary2x2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.m;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

/// Checked constructor for the receivers' rotation gate.
pub fn make_rotation(theta: f64) -> Result<Unitary2x2> {
    if !theta.is_finite() {
        return Err(invalid(format!("rotation angle must be finite, got {theta}")));
    }
    Ok(Unitary2x2::rotation(theta))
}
