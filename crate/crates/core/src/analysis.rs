//! How well a random y-rotation hides a qubit, and what the receivers learn.
//!
//! For `|ψ⟩ = cos(ϑ/2)|0⟩ + e^{iϕ} sin(ϑ/2)|1⟩` the overlap with `R(φ)|ψ⟩` is
//! `F = cos²φ + sin²φ · sin²ϑ · sin²ϕ`. Uniform averages over all three angles
//! give 5/8; restricting to real amplitudes (`ϕ = 0`) gives 1/2, and the
//! σ_y eigenstates are untouched by any rotation.
//!
//! Monte Carlo estimates are computed in fixed blocks of [`BLOCK_SIZE`]
//! samples. Block `k` draws from ChaCha stream `k` of the master seed and
//! blocks are merged in index order, so results do not depend on how many
//! threads run them.

use std::f64::consts::{PI, TAU};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::protocol::{self, Outcomes, ScenarioConfig};
use crate::qsim::{DensityMatrix, StateVector, Unitary2x2};
use crate::Complex64;

/// Samples per independently seeded block.
pub const BLOCK_SIZE: usize = 1 << 14;

/// A pure qubit state by its Bloch angles.
///
/// `varphi` is the azimuthal phase of the `|1⟩` amplitude, not the effective
/// rotation angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    vartheta: f64,
    varphi: f64,
}

impl BlochState {
    /// `vartheta ∈ [0, π]`; `varphi` is reduced into `[0, 2π)`.
    pub fn new(vartheta: f64, varphi: f64) -> Result<Self> {
        if !(vartheta.is_finite() && varphi.is_finite()) {
            return Err(invalid("Bloch angles must be finite"));
        }
        if !(0.0..=PI).contains(&vartheta) {
            return Err(invalid(format!("polar angle {vartheta} outside [0, π]")));
        }
        Ok(Self {
            vartheta,
            varphi: varphi.rem_euclid(TAU),
        })
    }

    /// Bloch angles of `α|0⟩ + β|1⟩`, ignoring global phase.
    pub fn from_amplitudes(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(invalid("amplitudes must be finite and not both zero"));
        }
        let vartheta = 2.0 * (alpha.norm() / norm).min(1.0).acos();
        let varphi = if alpha.norm() == 0.0 || beta.norm() == 0.0 {
            0.0
        } else {
            beta.arg() - alpha.arg()
        };
        Self::new(vartheta, varphi)
    }

    pub fn vartheta(&self) -> f64 {
        self.vartheta
    }

    pub fn varphi(&self) -> f64 {
        self.varphi
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        let half = 0.5 * self.vartheta;
        (
            Complex64::new(half.cos(), 0.0),
            Complex64::from_polar(half.sin(), self.varphi),
        )
    }

    pub fn to_state(&self) -> StateVector {
        let (alpha, beta) = self.amplitudes();
        StateVector::from_unnormalized(vec![alpha, beta]).expect("Bloch amplitudes are unit norm")
    }
}

/// `|⟨ψ|R(φ)|ψ⟩|²` in closed form.
pub fn rotation_fidelity(state: &BlochState, phi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    let y = state.vartheta.sin() * state.varphi.sin();
    c * c + s * s * y * y
}

/// Mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityStats {
    pub mean: f64,
    /// Sample standard deviation over `√samples`.
    pub std_error: f64,
    pub samples: usize,
}

impl FidelityStats {
    pub fn from_samples(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("need at least one sample"));
        }
        Ok(Accumulator::from_slice(values).finish())
    }

    /// True when `target` lies within `k` standard errors of the mean.
    pub fn within_sigma(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

/// Running (count, mean, M2) triple; merges are exact in any fixed order.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Accumulator {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    pub(crate) fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn from_slice(values: &[f64]) -> Self {
        let mut acc = Self::default();
        values.iter().for_each(|&x| acc.push(x));
        acc
    }

    pub(crate) fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2
            + other.m2
            + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        Self { count, mean, m2 }
    }

    pub(crate) fn finish(self) -> FidelityStats {
        let std_error = if self.count > 1 {
            (self.m2 / (self.count - 1) as f64).sqrt() / (self.count as f64).sqrt()
        } else {
            0.0
        };
        FidelityStats {
            mean: self.mean,
            std_error,
            samples: self.count,
        }
    }
}

/// Runs `samples` draws in seeded blocks and merges them in block order.
pub(crate) fn block_estimate<F>(samples: usize, seed: u64, draw: F) -> Result<FidelityStats>
where
    F: Fn(&mut dyn RngCore) -> Result<f64> + Sync,
{
    if samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    let blocks = samples.div_ceil(BLOCK_SIZE);
    let partials: Vec<Result<Accumulator>> = (0..blocks)
        .into_par_iter()
        .map(|k| {
            let mut rng = block_rng(seed, k);
            let len = BLOCK_SIZE.min(samples - k * BLOCK_SIZE);
            let mut acc = Accumulator::default();
            for _ in 0..len {
                acc.push(draw(&mut rng)?);
            }
            Ok(acc)
        })
        .collect();
    let mut total = Accumulator::default();
    for p in partials {
        total = total.merge(p?);
    }
    Ok(total.finish())
}

pub(crate) fn block_rng(seed: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    rng
}

/// How the polar angle ϑ is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum PolarMeasure {
    /// ϑ uniform on `[0, π]`; this is the measure that yields 5/8.
    Uniform,
    /// Uniform over the Bloch sphere (density `sin ϑ / 2`). Gives 2/3, not 5/8.
    Haar,
    Fixed(f64),
}

/// How an angle with a full-period average is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum AngleMeasure {
    Uniform,
    Fixed(f64),
}

/// Which of the three fidelity angles are averaged and how.
///
/// Uniform ϕ covers `[0, 2π)`; uniform φ covers `[0, π)`, a full period of
/// `cos²φ` and `sin²φ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AverageSpec {
    pub vartheta: PolarMeasure,
    pub varphi: AngleMeasure,
    pub phi: AngleMeasure,
}

impl Default for AverageSpec {
    fn default() -> Self {
        Self {
            vartheta: PolarMeasure::Uniform,
            varphi: AngleMeasure::Uniform,
            phi: AngleMeasure::Uniform,
        }
    }
}

impl AverageSpec {
    /// Real-amplitude messages (ϕ = 0).
    pub fn real_messages() -> Self {
        Self {
            varphi: AngleMeasure::Fixed(0.0),
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let fixed = [
            match self.vartheta {
                PolarMeasure::Fixed(x) => Some(x),
                _ => None,
            },
            match self.varphi {
                AngleMeasure::Fixed(x) => Some(x),
                _ => None,
            },
            match self.phi {
                AngleMeasure::Fixed(x) => Some(x),
                _ => None,
            },
        ];
        if fixed.iter().flatten().any(|x| !x.is_finite()) {
            return Err(invalid("fixed angles must be finite"));
        }
        if let PolarMeasure::Fixed(x) = self.vartheta {
            if !(0.0..=PI).contains(&x) {
                return Err(invalid(format!("polar angle {x} outside [0, π]")));
            }
        }
        Ok(())
    }

    fn draw(&self, rng: &mut dyn RngCore) -> (BlochState, f64) {
        let vartheta = match self.vartheta {
            PolarMeasure::Uniform => PI * rng.random::<f64>(),
            PolarMeasure::Haar => (1.0 - 2.0 * rng.random::<f64>()).acos(),
            PolarMeasure::Fixed(x) => x,
        };
        let varphi = match self.varphi {
            AngleMeasure::Uniform => TAU * rng.random::<f64>(),
            AngleMeasure::Fixed(x) => x,
        };
        let phi = match self.phi {
            AngleMeasure::Uniform => PI * rng.random::<f64>(),
            AngleMeasure::Fixed(x) => x,
        };
        let state = BlochState {
            vartheta: vartheta.clamp(0.0, PI),
            varphi: varphi.rem_euclid(TAU),
        };
        (state, phi)
    }
}

/// Monte Carlo mean of [`rotation_fidelity`] under `spec`.
pub fn average_fidelity(spec: &AverageSpec, samples: usize, seed: u64) -> Result<FidelityStats> {
    spec.validate()?;
    block_estimate(samples, seed, |rng| {
        let (state, phi) = spec.draw(rng);
        Ok(rotation_fidelity(&state, phi))
    })
}

/// Exact average of [`rotation_fidelity`] under `spec`.
///
/// The three angles are independent, so the average factorizes into
/// `⟨cos²φ⟩ + ⟨sin²φ⟩·⟨sin²ϑ⟩·⟨sin²ϕ⟩`; each factor is 1/2 over a full period,
/// 2/3 for Haar-distributed ϑ, or the fixed value.
pub fn average_fidelity_quadrature(spec: &AverageSpec) -> Result<f64> {
    spec.validate()?;
    let sin2_vartheta = match spec.vartheta {
        PolarMeasure::Uniform => 0.5,
        PolarMeasure::Haar => 2.0 / 3.0,
        PolarMeasure::Fixed(x) => x.sin().powi(2),
    };
    let sin2_varphi = match spec.varphi {
        AngleMeasure::Uniform => 0.5,
        AngleMeasure::Fixed(x) => x.sin().powi(2),
    };
    let (cos2_phi, sin2_phi) = match spec.phi {
        AngleMeasure::Uniform => (0.5, 0.5),
        AngleMeasure::Fixed(x) => (x.cos().powi(2), x.sin().powi(2)),
    };
    Ok(cos2_phi + sin2_phi * sin2_vartheta * sin2_varphi)
}

/// Distribution of each receiver's angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ThetaDistribution {
    /// Uniform on `[0, π)`.
    Uniform,
    /// Uniform on `[low, high)` with `0 ≤ low < high ≤ π`.
    Range { low: f64, high: f64 },
    Fixed { value: f64 },
}

/// Receiver count plus the (shared) distribution of their angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleDistributionSpec {
    receivers: usize,
    distribution: ThetaDistribution,
}

impl AngleDistributionSpec {
    pub fn new(receivers: usize, distribution: ThetaDistribution) -> Result<Self> {
        if receivers == 0 {
            return Err(invalid("at least one receiver is required"));
        }
        match distribution {
            ThetaDistribution::Uniform => {}
            ThetaDistribution::Range { low, high } => {
                if !(0.0 <= low && low < high && high <= PI) {
                    return Err(invalid(format!("angle range [{low}, {high}) not within [0, π)")));
                }
            }
            ThetaDistribution::Fixed { value } => {
                if !(0.0..PI).contains(&value) {
                    return Err(invalid(format!("fixed angle {value} not within [0, π)")));
                }
            }
        }
        Ok(Self {
            receivers,
            distribution,
        })
    }

    pub fn uniform(receivers: usize) -> Result<Self> {
        Self::new(receivers, ThetaDistribution::Uniform)
    }

    pub fn receivers(&self) -> usize {
        self.receivers
    }

    pub fn distribution(&self) -> ThetaDistribution {
        self.distribution
    }

    pub fn draw_one(&self, rng: &mut dyn RngCore) -> f64 {
        match self.distribution {
            ThetaDistribution::Uniform => PI * rng.random::<f64>(),
            ThetaDistribution::Range { low, high } => low + (high - low) * rng.random::<f64>(),
            ThetaDistribution::Fixed { value } => value,
        }
    }

    pub fn draw(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        (0..self.receivers).map(|_| self.draw_one(rng)).collect()
    }
}

/// Effective angles φ from `samples` full protocol runs with fresh receiver
/// angles each time.
pub fn protocol_phi_samples(
    spec: &AngleDistributionSpec,
    samples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let base = ScenarioConfig::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        vec![0.0; spec.receivers],
    )?;
    let blocks = samples.div_ceil(BLOCK_SIZE);
    let per_block: Vec<Result<Vec<f64>>> = (0..blocks)
        .into_par_iter()
        .map(|k| {
            let mut rng = block_rng(seed, k);
            let len = BLOCK_SIZE.min(samples - k * BLOCK_SIZE);
            let mut out = Vec::with_capacity(len);
            for _ in 0..len {
                let config = base.with_thetas(spec.draw(&mut rng))?;
                out.push(protocol::execute(&config, Outcomes::Sampled(&mut rng))?.phi);
            }
            Ok(out)
        })
        .collect();
    let mut phis = Vec::with_capacity(samples);
    for block in per_block {
        phis.extend(block?);
    }
    Ok(phis)
}

/// Worst-case fidelity of `R(φ)` on the two σ_y eigenstates `(|0⟩ ± i|1⟩)/√2`.
pub fn sigma_y_eigenstate_invariance(phi: f64) -> f64 {
    let rotation = Unitary2x2::rotation(phi);
    [1.0, -1.0]
        .into_iter()
        .map(|sign| {
            let psi = StateVector::from_unnormalized(vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, sign),
            ])
            .expect("nonzero");
            let turned = psi.apply_single(0, &rotation).expect("one-qubit gate");
            psi.fidelity_up_to_phase(&turned).expect("same dimension")
        })
        .fold(1.0, f64::min)
}

/// The α,β-independent receiver state `(|0…0⟩⟨0…0| + |1…1⟩⟨1…1|)/2`.
pub fn receiver_mixture(n: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(invalid("at least one receiver is required"));
    }
    let dim = 1usize << n;
    let mut weights = vec![0.0; dim];
    weights[0] = 0.5;
    weights[dim - 1] = 0.5;
    DensityMatrix::diagonal(&weights)
}

/// Trace distance between the receivers' joint reduced state of `state` and
/// [`receiver_mixture`].
pub fn receiver_leakage_of(state: &StateVector, n: usize) -> Result<f64> {
    if state.num_qubits() != n + 2 {
        return Err(invalid(format!(
            "register of {} qubits does not hold {n} receivers",
            state.num_qubits()
        )));
    }
    let keep: Vec<usize> = (0..n).map(protocol::receiver_wire).collect();
    state
        .reduced_density(&keep)?
        .trace_distance(&receiver_mixture(n)?)
}

/// How far the receivers' view after Alice's encoding is from the
/// message-independent mixture; zero for every message.
pub fn receiver_leakage(config: &ScenarioConfig) -> Result<f64> {
    let encoded = protocol::alice_encode(&protocol::prepare(config)?)?;
    receiver_leakage_of(&encoded, config.n())
}

/// One share's reduced state when the message is spread as `α|0…0⟩ + β|1…1⟩`.
pub fn hillery_share_density(alpha: Complex64, beta: Complex64, n: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(invalid("at least one share is required"));
    }
    let dim = 1usize << n;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = alpha;
    amps[dim - 1] = beta;
    StateVector::from_amplitudes(amps)?.reduced_density(&[0])
}
