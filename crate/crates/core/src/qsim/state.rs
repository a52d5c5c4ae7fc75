use num_complex::Complex64;
use rand::{Rng, RngCore};

use super::density::DensityMatrix;
use super::unitary::Unitary2x2;
use super::{MAX_QUBITS, NORM_TOL, ZERO_PROBABILITY};
use crate::error::{invalid, Error, Result};

/// Where a measurement outcome comes from.
pub enum OutcomeSource<'a> {
    /// Post-select the given bit; fails if it has (numerically) zero probability.
    Forced(u8),
    /// Draw the outcome from the Born distribution.
    Sample(&'a mut dyn RngCore),
}

/// Result of a projective Z measurement on one wire.
#[derive(Clone, Debug)]
pub struct Measurement {
    pub outcome: u8,
    pub probability: f64,
    pub state: StateVector,
}

/// Dense, normalized pure state of `num_qubits` qubits.
///
/// Basis index bit order is most-significant-first: qubit 0 is the leftmost
/// label in a ket such as `|q0 q1 … q_{n-1}⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The all-zero register `|0…0⟩`.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_size(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(invalid(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Wraps an amplitude array that must already be normalized within `1e-10`.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let num_qubits = qubits_for_len(amplitudes.len())?;
        let norm = norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Normalizes an arbitrary nonzero amplitude array.
    pub fn from_unnormalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let num_qubits = qubits_for_len(amplitudes.len())?;
        let norm = norm_sqr(&amplitudes);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        let scale = 1.0 / norm.sqrt();
        amplitudes.iter_mut().for_each(|z| *z *= scale);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// `α|0⟩ + β|1⟩`.
    pub fn qubit(alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::from_amplitudes(vec![alpha, beta])
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// Kronecker product `self ⊗ other`; `self` occupies the leading wires.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        check_size(self.num_qubits + other.num_qubits)?;
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(Self {
            num_qubits: self.num_qubits + other.num_qubits,
            amplitudes,
        })
    }

    fn mask(&self, qubit: usize) -> Result<usize> {
        if qubit >= self.num_qubits {
            return Err(Error::IndexOutOfRange {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(1 << (self.num_qubits - 1 - qubit))
    }

    fn distinct_masks(&self, q1: usize, q2: usize) -> Result<(usize, usize)> {
        let m1 = self.mask(q1)?;
        let m2 = self.mask(q2)?;
        if q1 == q2 {
            return Err(invalid(format!("two-qubit gate needs distinct wires, got {q1} twice")));
        }
        Ok((m1, m2))
    }

    pub fn apply_single(&self, target: usize, u: &Unitary2x2) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_single_in_place(target, u)?;
        Ok(out)
    }

    pub fn apply_single_in_place(&mut self, target: usize, u: &Unitary2x2) -> Result<()> {
        let mask = self.mask(target)?;
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                let j = i | mask;
                let [x, y] = u.apply([self.amplitudes[i], self.amplitudes[j]]);
                self.amplitudes[i] = x;
                self.amplitudes[j] = y;
            }
        }
        Ok(())
    }

    /// Controlled-Z: negates every amplitude whose two wires both read 1.
    pub fn apply_cz(&self, control: usize, target: usize) -> Result<StateVector> {
        let (mc, mt) = self.distinct_masks(control, target)?;
        let mut out = self.clone();
        for (i, z) in out.amplitudes.iter_mut().enumerate() {
            if i & mc != 0 && i & mt != 0 {
                *z = -*z;
            }
        }
        Ok(out)
    }

    pub fn apply_cnot(&self, control: usize, target: usize) -> Result<StateVector> {
        let (mc, mt) = self.distinct_masks(control, target)?;
        let mut out = self.clone();
        for i in 0..out.amplitudes.len() {
            if i & mc != 0 && i & mt == 0 {
                out.amplitudes.swap(i, i | mt);
            }
        }
        Ok(out)
    }

    pub fn apply_swap(&self, q1: usize, q2: usize) -> Result<StateVector> {
        let (m1, m2) = self.distinct_masks(q1, q2)?;
        let mut out = self.clone();
        for i in 0..out.amplitudes.len() {
            // visit each |…1…0…⟩ / |…0…1…⟩ pair once
            if i & m1 != 0 && i & m2 == 0 {
                out.amplitudes.swap(i, (i & !m1) | m2);
            }
        }
        Ok(out)
    }

    /// Born probability that `target` reads `bit`.
    pub fn probability_of(&self, target: usize, bit: u8) -> Result<f64> {
        let mask = self.mask(target)?;
        let want = if bit == 0 { 0 } else { mask };
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == want)
            .map(|(_, z)| z.norm_sqr())
            .sum())
    }

    /// Projective computational-basis measurement of one wire.
    ///
    /// The measured wire stays in the register, collapsed onto the outcome.
    pub fn measure(&self, target: usize, source: OutcomeSource<'_>) -> Result<Measurement> {
        let p1 = self.probability_of(target, 1)?;
        let p0 = (1.0 - p1).max(0.0);
        let outcome = match source {
            OutcomeSource::Forced(bit) => {
                if bit > 1 {
                    return Err(invalid(format!("measurement outcome must be 0 or 1, got {bit}")));
                }
                let p = if bit == 0 { p0 } else { p1 };
                if p < ZERO_PROBABILITY {
                    return Err(Error::ZeroProbabilityBranch(format!(
                        "qubit {target} cannot read {bit} (probability {p:e})"
                    )));
                }
                bit
            }
            OutcomeSource::Sample(rng) => {
                let u: f64 = rng.random();
                let drawn = u8::from(u >= p0);
                // rounding guard: never land on a measure-zero outcome
                match drawn {
                    0 if p0 < ZERO_PROBABILITY => 1,
                    1 if p1 < ZERO_PROBABILITY => 0,
                    b => b,
                }
            }
        };
        let probability = if outcome == 0 { p0 } else { p1 };
        let mask = self.mask(target)?;
        let want = if outcome == 0 { 0 } else { mask };
        let scale = 1.0 / probability.sqrt();
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, z)| {
                if i & mask == want {
                    z * scale
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok(Measurement {
            outcome,
            probability,
            state: StateVector {
                num_qubits: self.num_qubits,
                amplitudes,
            },
        })
    }

    /// Reads off the state of `target` when every other wire is in a definite
    /// basis state (as after measuring all of them).
    pub fn factor_qubit(&self, target: usize) -> Result<StateVector> {
        let mask = self.mask(target)?;
        let (peak, _) = self
            .amplitudes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .expect("register is never empty");
        let base = peak & !mask;
        let pair = [self.amplitudes[base], self.amplitudes[base | mask]];
        let weight = pair[0].norm_sqr() + pair[1].norm_sqr();
        if (weight - 1.0).abs() > NORM_TOL {
            return Err(invalid(format!(
                "qubit {target} is entangled with the rest of the register"
            )));
        }
        StateVector::from_unnormalized(pair.to_vec())
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(invalid(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`, insensitive to global phase.
    pub fn fidelity_up_to_phase(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().min(1.0))
    }

    /// Partial trace onto the wires in `keep`, in the order given.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(invalid("reduced_density needs at least one qubit to keep"));
        }
        let mut masks = Vec::with_capacity(keep.len());
        for (k, &q) in keep.iter().enumerate() {
            if keep[..k].contains(&q) {
                return Err(invalid(format!("qubit {q} listed twice in keep-set")));
            }
            masks.push(self.mask(q)?);
        }
        let kept_mask: usize = masks.iter().fold(0, |acc, m| acc | m);
        let kept_dim = 1usize << keep.len();

        // split each basis index into (kept label, environment label)
        let kept_label = |i: usize| {
            masks
                .iter()
                .fold(0usize, |acc, &m| (acc << 1) | usize::from(i & m != 0))
        };
        let mut rho = vec![Complex64::new(0.0, 0.0); kept_dim * kept_dim];
        let env_dim = self.dim() >> keep.len();
        let mut by_env: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); env_dim];
        let env_masks: Vec<usize> = (0..self.num_qubits)
            .map(|q| 1usize << (self.num_qubits - 1 - q))
            .filter(|m| m & kept_mask == 0)
            .collect();
        for (i, z) in self.amplitudes.iter().enumerate() {
            if z.norm_sqr() == 0.0 {
                continue;
            }
            let env = env_masks
                .iter()
                .fold(0usize, |acc, &m| (acc << 1) | usize::from(i & m != 0));
            by_env[env].push((kept_label(i), *z));
        }
        for group in &by_env {
            for &(r, zr) in group {
                for &(c, zc) in group {
                    rho[r * kept_dim + c] += zr * zc.conj();
                }
            }
        }
        DensityMatrix::from_row_major(kept_dim, rho)
    }
}

fn norm_sqr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(Complex64::norm_sqr).sum()
}

fn check_size(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(invalid("a register needs at least one qubit"));
    }
    if num_qubits > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "{num_qubits} qubits exceeds the {MAX_QUBITS}-qubit limit"
        )));
    }
    Ok(())
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(invalid(format!(
            "amplitude array length {len} is not a power of two ≥ 2"
        )));
    }
    let n = len.trailing_zeros() as usize;
    check_size(n)?;
    Ok(n)
}
