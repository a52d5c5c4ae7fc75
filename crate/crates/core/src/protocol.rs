//! Teleporting a y-rotation through an `(n+1)`-qubit GHZ state.
//!
//! Alice holds the message qubit `a` and one GHZ qubit `b`; each of the `n`
//! receivers holds one GHZ qubit. After Alice's controlled-Z and CNOT on
//! `(a, b)`, every receiver rotates and measures their qubit, and Alice
//! finishes with SWAP, Hadamard on `b`, and a measurement of `b`. Qubit `a`
//! then carries `R(φ)|m⟩` (Alice reads 0) or `R(φ)σ_z|m⟩` (Alice reads 1),
//! where `φ` depends only on the receivers' angles and outcomes.

use std::f64::consts::PI;
use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::qsim::{
    make_rotation, OutcomeSource, StateVector, Unitary2x2, MAX_QUBITS, NORM_TOL,
    ZERO_PROBABILITY,
};
use crate::Complex64;

/// Alice's message qubit.
pub const QUBIT_A: usize = 0;
/// Alice's share of the GHZ state.
pub const QUBIT_B: usize = 1;
/// Largest receiver count accepted by [`enumerate_branches`].
pub const MAX_ENUMERATED_RECEIVERS: usize = 12;

/// Register wire of receiver `index` (0-based).
pub const fn receiver_wire(index: usize) -> usize {
    2 + index
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Enumerate,
    #[default]
    Sample,
}

/// Message amplitudes, receiver angles and run settings.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    alpha: Complex64,
    beta: Complex64,
    thetas: Vec<f64>,
    seed: u64,
    mode: Mode,
}

impl ScenarioConfig {
    /// One receiver per entry of `thetas`.
    pub fn new(alpha: Complex64, beta: Complex64, thetas: Vec<f64>) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        check_thetas(&thetas)?;
        Ok(Self {
            alpha,
            beta,
            thetas,
            seed: 0,
            mode: Mode::default(),
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    /// Same message and settings with a new set of angles.
    pub fn with_thetas(&self, thetas: Vec<f64>) -> Result<Self> {
        check_thetas(&thetas)?;
        Ok(Self {
            thetas,
            ..self.clone()
        })
    }

    pub fn with_message(&self, alpha: Complex64, beta: Complex64) -> Result<Self> {
        Ok(Self::new(alpha, beta, self.thetas.clone())?
            .with_seed(self.seed)
            .with_mode(self.mode))
    }

    pub fn n(&self) -> usize {
        self.thetas.len()
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// `α|0⟩ + β|1⟩` as a one-qubit state.
    pub fn message(&self) -> StateVector {
        StateVector::from_unnormalized(vec![self.alpha, self.beta])
            .expect("config amplitudes are validated")
    }
}

fn check_thetas(thetas: &[f64]) -> Result<()> {
    if thetas.is_empty() {
        return Err(invalid("at least one receiver is required"));
    }
    if thetas.len() + 2 > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "{} receivers need {} qubits (limit {MAX_QUBITS})",
            thetas.len(),
            thetas.len() + 2
        )));
    }
    if let Some(bad) = thetas.iter().find(|t| !t.is_finite()) {
        return Err(invalid(format!("rotation angle must be finite, got {bad}")));
    }
    Ok(())
}

/// One complete measurement history of the protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    /// Entry `i` is receiver `i`'s outcome.
    pub receiver_outcomes: Vec<u8>,
    /// Number of receivers that read 0.
    pub m: usize,
    pub alice_outcome: u8,
    pub probability: f64,
    /// Effective rotation angle in `(−π, π]`.
    pub phi: f64,
    /// Qubit `a` before any recovery.
    pub final_state: StateVector,
}

/// `(α|0⟩+β|1⟩)_a ⊗ (|0⟩_b|0…0⟩ + |1⟩_b|1…1⟩)/√2`.
pub fn prepare(config: &ScenarioConfig) -> Result<StateVector> {
    let ghz_qubits = config.n() + 1;
    let mut ghz = vec![Complex64::new(0.0, 0.0); 1 << ghz_qubits];
    ghz[0] = Complex64::new(1.0, 0.0);
    ghz[(1 << ghz_qubits) - 1] = Complex64::new(1.0, 0.0);
    let ghz = StateVector::from_unnormalized(ghz)?;
    config.message().tensor(&ghz)
}

/// Alice's controlled-Z then CNOT on `(a, b)`, control `a`.
pub fn alice_encode(state: &StateVector) -> Result<StateVector> {
    state.apply_cz(QUBIT_A, QUBIT_B)?.apply_cnot(QUBIT_A, QUBIT_B)
}

/// Receiver `i` applies `R(θ_i)` to their qubit.
pub fn receivers_rotate(state: &StateVector, thetas: &[f64]) -> Result<StateVector> {
    if thetas.len() + 2 != state.num_qubits() {
        return Err(invalid(format!(
            "{} angles for a register with {} receivers",
            thetas.len(),
            state.num_qubits().saturating_sub(2)
        )));
    }
    let mut out = state.clone();
    for (i, &theta) in thetas.iter().enumerate() {
        out.apply_single_in_place(receiver_wire(i), &make_rotation(theta)?)?;
    }
    Ok(out)
}

/// Unnormalized `(A′, B′)` amplitudes of a receiver outcome pattern.
///
/// With `Z` the receivers that read 0 and `O` those that read 1:
/// `A′ = Π_Z cosθ · Π_O sinθ` and `B′ = (−1)^|Z| · Π_Z sinθ · Π_O cosθ`.
pub fn phi_components(thetas: &[f64], outcomes: &[u8]) -> Result<(f64, f64)> {
    if thetas.len() != outcomes.len() {
        return Err(invalid(format!(
            "{} angles but {} outcomes",
            thetas.len(),
            outcomes.len()
        )));
    }
    let mut a = 1.0;
    let mut b = 1.0;
    for (&theta, &bit) in thetas.iter().zip(outcomes) {
        if !theta.is_finite() {
            return Err(invalid(format!("rotation angle must be finite, got {theta}")));
        }
        let (s, c) = theta.sin_cos();
        match bit {
            0 => {
                a *= c;
                b *= -s;
            }
            1 => {
                a *= s;
                b *= c;
            }
            other => return Err(invalid(format!("outcome must be 0 or 1, got {other}"))),
        }
    }
    Ok((a, b))
}

/// Effective rotation angle for a receiver outcome pattern, in `(−π, π]`.
pub fn compute_phi(thetas: &[f64], outcomes: &[u8]) -> Result<f64> {
    let (a, b) = phi_components(thetas, outcomes)?;
    if a * a + b * b < ZERO_PROBABILITY {
        return Err(Error::ZeroProbabilityBranch(format!(
            "outcome pattern {} has no weight",
            bits_to_string(outcomes)
        )));
    }
    Ok(wrap_angle(b.atan2(a)))
}

/// Maps `atan2`'s `−π` onto `π`.
fn wrap_angle(phi: f64) -> f64 {
    if phi <= -PI {
        phi + 2.0 * PI
    } else {
        phi
    }
}

pub fn bits_to_string(bits: &[u8]) -> String {
    bits.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect()
}

/// Alice's closing moves.
#[derive(Clone, Debug)]
pub struct Finalized {
    pub outcome: u8,
    /// Conditional probability of `outcome` given the receivers' results.
    pub probability: f64,
    pub qubit_a: StateVector,
}

/// SWAP(a, b), Hadamard on `b`, measure `b`, and hand back qubit `a`.
///
/// Every receiver wire must already be measured.
pub fn alice_finalize(state: &StateVector, source: OutcomeSource<'_>) -> Result<Finalized> {
    if state.num_qubits() < 3 {
        return Err(invalid("register must hold a, b and at least one receiver"));
    }
    for wire in 2..state.num_qubits() {
        let p1 = state.probability_of(wire, 1)?;
        if p1 > NORM_TOL && p1 < 1.0 - NORM_TOL {
            return Err(invalid(format!("receiver wire {wire} has not been measured")));
        }
    }
    let turned = state
        .apply_swap(QUBIT_A, QUBIT_B)?
        .apply_single(QUBIT_B, &Unitary2x2::hadamard())?;
    let meas = turned.measure(QUBIT_B, source)?;
    Ok(Finalized {
        outcome: meas.outcome,
        probability: meas.probability,
        qubit_a: meas.state.factor_qubit(QUBIT_A)?,
    })
}

/// How measurement outcomes are chosen during a run.
pub enum Outcomes<'a> {
    Forced { receivers: &'a [u8], alice: u8 },
    Sampled(&'a mut dyn RngCore),
}

/// The encoded and rotated register, before any measurement.
pub fn rotated_state(config: &ScenarioConfig) -> Result<StateVector> {
    receivers_rotate(&alice_encode(&prepare(config)?)?, config.thetas())
}

/// Runs the protocol once, measuring receivers in index order.
pub fn execute(config: &ScenarioConfig, outcomes: Outcomes<'_>) -> Result<Branch> {
    let mut state = rotated_state(config)?;
    let mut probability = 1.0;
    let mut receiver_outcomes = Vec::with_capacity(config.n());

    let finalized = match outcomes {
        Outcomes::Forced { receivers, alice } => {
            if receivers.len() != config.n() {
                return Err(invalid(format!(
                    "{} forced outcomes for {} receivers",
                    receivers.len(),
                    config.n()
                )));
            }
            for (i, &bit) in receivers.iter().enumerate() {
                let meas = state.measure(receiver_wire(i), OutcomeSource::Forced(bit))?;
                probability *= meas.probability;
                receiver_outcomes.push(meas.outcome);
                state = meas.state;
            }
            alice_finalize(&state, OutcomeSource::Forced(alice))?
        }
        Outcomes::Sampled(rng) => {
            for i in 0..config.n() {
                let meas = state.measure(receiver_wire(i), OutcomeSource::Sample(&mut *rng))?;
                probability *= meas.probability;
                receiver_outcomes.push(meas.outcome);
                state = meas.state;
            }
            alice_finalize(&state, OutcomeSource::Sample(rng))?
        }
    };
    probability *= finalized.probability;
    if probability < ZERO_PROBABILITY {
        return Err(Error::ZeroProbabilityBranch(format!(
            "history {}/{} has probability {probability:e}",
            bits_to_string(&receiver_outcomes),
            finalized.outcome
        )));
    }
    let phi = compute_phi(config.thetas(), &receiver_outcomes)?;
    Ok(Branch {
        m: receiver_outcomes.iter().filter(|&&b| b == 0).count(),
        receiver_outcomes,
        alice_outcome: finalized.outcome,
        probability,
        phi,
        final_state: finalized.qubit_a,
    })
}

/// Every outcome history with nonzero Born weight, ordered by receiver bits
/// (receiver 0 most significant) and then Alice's bit.
pub fn enumerate_branches(config: &ScenarioConfig) -> Result<Vec<Branch>> {
    if config.n() > MAX_ENUMERATED_RECEIVERS {
        return Err(Error::Capacity(format!(
            "enumeration supports at most {MAX_ENUMERATED_RECEIVERS} receivers, got {}",
            config.n()
        )));
    }
    let mut branches = Vec::new();
    let mut outcomes = Vec::with_capacity(config.n());
    descend(
        config,
        rotated_state(config)?,
        1.0,
        &mut outcomes,
        &mut branches,
    )?;
    Ok(branches)
}

fn descend(
    config: &ScenarioConfig,
    state: StateVector,
    probability: f64,
    outcomes: &mut Vec<u8>,
    out: &mut Vec<Branch>,
) -> Result<()> {
    let depth = outcomes.len();
    if depth == config.n() {
        let phi = compute_phi(config.thetas(), outcomes)?;
        for alice in 0..2u8 {
            let finalized = match alice_finalize(&state, OutcomeSource::Forced(alice)) {
                Ok(f) => f,
                Err(Error::ZeroProbabilityBranch(_)) => continue,
                Err(e) => return Err(e),
            };
            let p = probability * finalized.probability;
            if p < ZERO_PROBABILITY {
                continue;
            }
            out.push(Branch {
                receiver_outcomes: outcomes.clone(),
                m: outcomes.iter().filter(|&&b| b == 0).count(),
                alice_outcome: alice,
                probability: p,
                phi,
                final_state: finalized.qubit_a,
            });
        }
        return Ok(());
    }
    for bit in 0..2u8 {
        let meas = match state.measure(receiver_wire(depth), OutcomeSource::Forced(bit)) {
            Ok(m) => m,
            Err(Error::ZeroProbabilityBranch(_)) => continue,
            Err(e) => return Err(e),
        };
        let p = probability * meas.probability;
        if p < ZERO_PROBABILITY {
            continue;
        }
        outcomes.push(bit);
        descend(config, meas.state, p, outcomes, out)?;
        outcomes.pop();
    }
    Ok(())
}

/// One Born-sampled run seeded from `config.seed()`.
pub fn run_sampled(config: &ScenarioConfig) -> Result<Branch> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed());
    execute(config, Outcomes::Sampled(&mut rng))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RecoveryKind {
    /// `R(−φ)`, used when Alice reads 0.
    #[serde(rename = "R(-phi)")]
    RotateBack,
    /// `σ_z·R(−π−φ)`, used when Alice reads 1.
    #[serde(rename = "sigma_z*R(-pi-phi)")]
    PhaseFlipRotateBack,
}

impl fmt::Display for RecoveryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecoveryKind::RotateBack => "R(-phi)",
            RecoveryKind::PhaseFlipRotateBack => "sigma_z*R(-pi-phi)",
        })
    }
}

/// The correction the holder of qubit `a` applies once `φ` and Alice's bit are known.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecoveryPlan {
    pub alice_outcome: u8,
    pub unitary: Unitary2x2,
    pub kind: RecoveryKind,
}

impl RecoveryPlan {
    pub fn apply(&self, qubit: &StateVector) -> Result<StateVector> {
        qubit.apply_single(0, &self.unitary)
    }
}

/// Undoes the branch rotation; exact up to a global sign.
pub fn recovery_plan(phi: f64, alice_outcome: u8) -> RecoveryPlan {
    debug_assert!(alice_outcome <= 1, "alice outcome must be a bit");
    if alice_outcome == 0 {
        RecoveryPlan {
            alice_outcome,
            unitary: Unitary2x2::rotation(-phi),
            kind: RecoveryKind::RotateBack,
        }
    } else {
        RecoveryPlan {
            alice_outcome,
            unitary: Unitary2x2::pauli_z() * Unitary2x2::rotation(-PI - phi),
            kind: RecoveryKind::PhaseFlipRotateBack,
        }
    }
}

/// Alice's own σ_z fix-up on an outcome-1 branch, leaving `R(π−φ)|m⟩`.
pub fn alice_alternative_correction(branch: &Branch) -> Result<StateVector> {
    if branch.alice_outcome != 1 {
        return Err(invalid(
            "the σ_z correction only applies when Alice reads 1",
        ));
    }
    branch.final_state.apply_single(0, &Unitary2x2::pauli_z())
}

/// Outcome of the single-receiver protocol after Alice's local fix-ups.
#[derive(Clone, Debug)]
pub struct TwoPartyResult {
    /// The final state is `exp(−i·sign·σ_y·θ)|m⟩`.
    pub sign: i8,
    pub receiver_outcome: u8,
    pub alice_outcome: u8,
    pub probability: f64,
    pub state: StateVector,
}

/// Alice and a single receiver: one Bell pair, one classical bit.
///
/// Knowing the receiver's bit, Alice applies `σ_z σ_x` when it is 1, and then
/// `σ_z` when her own bit is 1. The net effect is a rotation by the
/// receiver's angle whose direction is set by Alice's outcome.
pub fn two_party_run(
    alpha: Complex64,
    beta: Complex64,
    theta: f64,
    outcomes: Outcomes<'_>,
) -> Result<TwoPartyResult> {
    let config = ScenarioConfig::new(alpha, beta, vec![theta])?;
    let branch = execute(&config, outcomes)?;
    let receiver_outcome = branch.receiver_outcomes[0];
    let mut state = branch.final_state;
    if receiver_outcome == 1 {
        state = state.apply_single(0, &(Unitary2x2::pauli_z() * Unitary2x2::pauli_x()))?;
    }
    if branch.alice_outcome == 1 {
        state = state.apply_single(0, &Unitary2x2::pauli_z())?;
    }
    Ok(TwoPartyResult {
        sign: if branch.alice_outcome == 1 { 1 } else { -1 },
        receiver_outcome,
        alice_outcome: branch.alice_outcome,
        probability: branch.probability,
        state,
    })
}
