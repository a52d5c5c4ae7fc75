//! Receiver-encoded secret sharing as a message-passing simulation.
//!
//! Alice and the receivers are small state machines stepped by a single
//! [`Session`] scheduler, which also owns the shared quantum register. Once
//! every quantum step is done the parties talk over an in-process classical
//! channel, always in this order:
//!
//! 1. Alice reports her `b` outcome to Bob,
//! 2. Alice hands qubit `a` to Bob,
//! 3. each cooperating receiver other than Bob discloses angle, then outcome.
//!
//! Bob never sends anything: his own angle and outcome stay local.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{self, BlochState, FidelityStats};
use crate::error::{invalid, Result};
use crate::protocol::{self, compute_phi, receiver_wire, recovery_plan, RecoveryKind, ScenarioConfig};
use crate::qsim::{DensityMatrix, OutcomeSource, StateVector, Unitary2x2, NORM_TOL};
use crate::Complex64;

/// A protocol participant. Bob is the receiver Alice sends her qubit to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "role", content = "index", rename_all = "snake_case")]
pub enum PartyId {
    Alice,
    Receiver(usize),
    Bob(usize),
}

impl PartyId {
    pub fn receiver_index(&self) -> Option<usize> {
        match *self {
            PartyId::Alice => None,
            PartyId::Receiver(i) | PartyId::Bob(i) => Some(i),
        }
    }
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartyId::Alice => write!(f, "alice"),
            PartyId::Receiver(i) => write!(f, "receiver {i}"),
            PartyId::Bob(i) => write!(f, "bob (receiver {i})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Payload {
    /// A receiver's rotation angle, radians.
    AngleDisclosure { theta: f64 },
    OutcomeDisclosure { bit: u8 },
    AliceOutcome { bit: u8 },
    /// Qubit `a` as `[[re, im], [re, im]]`.
    QubitTransfer { amplitudes: [[f64; 2]; 2] },
}

impl Payload {
    pub fn phase(&self) -> Phase {
        match self {
            Payload::AliceOutcome { .. } => Phase::AliceOutcome,
            Payload::QubitTransfer { .. } => Phase::QubitTransfer,
            Payload::AngleDisclosure { .. } | Payload::OutcomeDisclosure { .. } => Phase::Disclosure,
        }
    }
}

/// Classical communication rounds, in protocol order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    AliceOutcome,
    QubitTransfer,
    Disclosure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalMessage {
    pub phase: Phase,
    pub from: PartyId,
    pub to: PartyId,
    pub payload: Payload,
}

/// What Bob did with the qubit once the messages were in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum BobAction {
    /// Every angle and outcome was known; applied the matching recovery.
    Recovered { recovery: RecoveryKind },
    /// φ known but Alice's bit was withheld; assumed she read 0.
    AssumedAliceZero,
    /// φ unknown. Undid only Alice's σ_z (when she reported 1).
    Fallback { phase_flip: bool },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub receivers: usize,
    pub bob: usize,
    /// Parties that agreed to send their data (Bob's is always local).
    pub cooperating: Vec<PartyId>,
    pub messages: Vec<ClassicalMessage>,
    pub bob_action: BobAction,
    /// `|⟨m|ψ_Bob⟩|²` for Bob's final qubit.
    pub fidelity: f64,
}

impl Transcript {
    /// Whether someone reading every classical message could compute φ.
    ///
    /// Always false: Bob's angle and outcome never leave him.
    pub fn interceptor_can_compute_phi(&self) -> bool {
        let mut known = vec![(false, false); self.receivers];
        for msg in &self.messages {
            if let Some(i) = msg.from.receiver_index().filter(|&i| i < self.receivers) {
                match msg.payload {
                    Payload::AngleDisclosure { .. } => known[i].0 = true,
                    Payload::OutcomeDisclosure { .. } => known[i].1 = true,
                    _ => {}
                }
            }
        }
        known.iter().all(|&(a, o)| a && o)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }
}

/// Alice plus every receiver: everyone cooperates.
pub fn full_cooperation(n: usize) -> Vec<PartyId> {
    std::iter::once(PartyId::Alice)
        .chain((0..n).map(PartyId::Receiver))
        .collect()
}

fn qubit_payload(q: &StateVector) -> [[f64; 2]; 2] {
    let a = q.amplitudes();
    [[a[0].re, a[0].im], [a[1].re, a[1].im]]
}

fn qubit_from_payload(p: &[[f64; 2]; 2]) -> Result<StateVector> {
    StateVector::from_unnormalized(vec![
        Complex64::new(p[0][0], p[0][1]),
        Complex64::new(p[1][0], p[1][1]),
    ])
}

struct AliceParty {
    cooperating: bool,
    outcome: Option<u8>,
    qubit: Option<StateVector>,
}

impl AliceParty {
    fn encode(&self, register: &StateVector) -> Result<StateVector> {
        protocol::alice_encode(register)
    }

    fn finalize(&mut self, register: &StateVector, rng: &mut dyn RngCore) -> Result<()> {
        let fin = protocol::alice_finalize(register, OutcomeSource::Sample(rng))?;
        self.outcome = Some(fin.outcome);
        self.qubit = Some(fin.qubit_a);
        Ok(())
    }

    fn outbox(&mut self, bob: PartyId) -> Vec<ClassicalMessage> {
        let mut out = Vec::new();
        if let (true, Some(bit)) = (self.cooperating, self.outcome) {
            out.push(ClassicalMessage {
                phase: Phase::AliceOutcome,
                from: PartyId::Alice,
                to: bob,
                payload: Payload::AliceOutcome { bit },
            });
        }
        if let Some(q) = self.qubit.take() {
            out.push(ClassicalMessage {
                phase: Phase::QubitTransfer,
                from: PartyId::Alice,
                to: bob,
                payload: Payload::QubitTransfer {
                    amplitudes: qubit_payload(&q),
                },
            });
        }
        out
    }
}

struct ReceiverParty {
    index: usize,
    theta: f64,
    cooperating: bool,
    outcome: Option<u8>,
}

impl ReceiverParty {
    fn rotate(&self, register: &mut StateVector) -> Result<()> {
        register.apply_single_in_place(receiver_wire(self.index), &Unitary2x2::rotation(self.theta))
    }

    fn measure(&mut self, register: &StateVector, rng: &mut dyn RngCore) -> Result<StateVector> {
        let m = register.measure(receiver_wire(self.index), OutcomeSource::Sample(rng))?;
        self.outcome = Some(m.outcome);
        Ok(m.state)
    }

    fn outbox(&self, bob: usize) -> Vec<ClassicalMessage> {
        let (true, Some(bit)) = (self.cooperating && self.index != bob, self.outcome) else {
            return Vec::new();
        };
        let from = PartyId::Receiver(self.index);
        let to = PartyId::Bob(bob);
        vec![
            ClassicalMessage {
                phase: Phase::Disclosure,
                from,
                to,
                payload: Payload::AngleDisclosure { theta: self.theta },
            },
            ClassicalMessage {
                phase: Phase::Disclosure,
                from,
                to,
                payload: Payload::OutcomeDisclosure { bit },
            },
        ]
    }
}

/// Bob's knowledge, filled in from his own receiver state and his inbox.
struct BobView {
    thetas: Vec<Option<f64>>,
    outcomes: Vec<Option<u8>>,
    alice_bit: Option<u8>,
    qubit: Option<StateVector>,
}

impl BobView {
    fn new(n: usize, own: &ReceiverParty) -> Self {
        let mut thetas = vec![None; n];
        let mut outcomes = vec![None; n];
        thetas[own.index] = Some(own.theta);
        outcomes[own.index] = own.outcome;
        Self {
            thetas,
            outcomes,
            alice_bit: None,
            qubit: None,
        }
    }

    fn receive(&mut self, msg: &ClassicalMessage) -> Result<()> {
        match (&msg.payload, msg.from) {
            (Payload::AliceOutcome { bit }, _) => self.alice_bit = Some(*bit),
            (Payload::QubitTransfer { amplitudes }, _) => {
                self.qubit = Some(qubit_from_payload(amplitudes)?)
            }
            (Payload::AngleDisclosure { theta }, PartyId::Receiver(i)) => self.thetas[i] = Some(*theta),
            (Payload::OutcomeDisclosure { bit }, PartyId::Receiver(i)) => self.outcomes[i] = Some(*bit),
            _ => return Err(invalid(format!("unexpected message from {}", msg.from))),
        }
        Ok(())
    }

    fn recover(&self) -> Result<(StateVector, BobAction)> {
        let qubit = self
            .qubit
            .as_ref()
            .ok_or_else(|| invalid("Bob never received qubit a"))?;
        let thetas: Option<Vec<f64>> = self.thetas.iter().copied().collect();
        let outcomes: Option<Vec<u8>> = self.outcomes.iter().copied().collect();
        match (thetas, outcomes) {
            (Some(thetas), Some(outcomes)) => {
                let phi = compute_phi(&thetas, &outcomes)?;
                let (bit, action) = match self.alice_bit {
                    Some(bit) => {
                        let kind = recovery_plan(phi, bit).kind;
                        (bit, BobAction::Recovered { recovery: kind })
                    }
                    None => (0, BobAction::AssumedAliceZero),
                };
                Ok((recovery_plan(phi, bit).apply(qubit)?, action))
            }
            _ => {
                let phase_flip = self.alice_bit == Some(1);
                let out = if phase_flip {
                    qubit.apply_single(0, &Unitary2x2::pauli_z())?
                } else {
                    qubit.clone()
                };
                Ok((out, BobAction::Fallback { phase_flip }))
            }
        }
    }
}

/// Scheduler stages, in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Prepared,
    Encoded,
    Rotated,
    Measured,
    Finalized,
    AliceSent,
    Disclosed,
    Done,
}

/// Deterministic single-threaded scheduler for one secret-sharing run.
pub struct Session {
    config: ScenarioConfig,
    bob: usize,
    cooperating: Vec<PartyId>,
    stage: Stage,
    register: StateVector,
    alice: AliceParty,
    receivers: Vec<ReceiverParty>,
    channel: VecDeque<ClassicalMessage>,
    delivered: Vec<ClassicalMessage>,
    bob_view: Option<BobView>,
    rng: ChaCha8Rng,
    record_views: bool,
    receiver_views: Vec<(Stage, DensityMatrix)>,
    result: Option<(BobAction, f64)>,
}

impl Session {
    pub fn new(config: &ScenarioConfig, bob: usize, cooperating: &[PartyId], seed: u64) -> Result<Self> {
        let n = config.n();
        if bob >= n {
            return Err(invalid(format!("bob index {bob} out of range for {n} receivers")));
        }
        let mut set = Vec::new();
        for &p in cooperating {
            match p {
                PartyId::Alice => set.push(p),
                PartyId::Receiver(i) | PartyId::Bob(i) if i >= n => {
                    return Err(invalid(format!("receiver index {i} out of range for {n} receivers")))
                }
                PartyId::Receiver(i) if i != bob => set.push(p),
                // Bob's data is local; listing him changes nothing
                _ => {}
            }
        }
        set.sort();
        set.dedup();
        let alice = AliceParty {
            cooperating: set.contains(&PartyId::Alice),
            outcome: None,
            qubit: None,
        };
        let receivers = config
            .thetas()
            .iter()
            .enumerate()
            .map(|(index, &theta)| ReceiverParty {
                index,
                theta,
                cooperating: set.contains(&PartyId::Receiver(index)),
                outcome: None,
            })
            .collect();
        Ok(Self {
            register: protocol::prepare(config)?,
            config: config.clone(),
            bob,
            cooperating: set,
            stage: Stage::Prepared,
            alice,
            receivers,
            channel: VecDeque::new(),
            delivered: Vec::new(),
            bob_view: None,
            rng: ChaCha8Rng::seed_from_u64(seed),
            record_views: false,
            receiver_views: Vec::new(),
            result: None,
        })
    }

    /// Snapshot the receivers' joint reduced state after every quantum stage.
    pub fn record_receiver_views(mut self) -> Self {
        self.record_views = true;
        self
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn receiver_views(&self) -> &[(Stage, DensityMatrix)] {
        &self.receiver_views
    }

    fn snapshot(&mut self) -> Result<()> {
        if self.record_views {
            let keep: Vec<usize> = (0..self.config.n()).map(receiver_wire).collect();
            let rho = self.register.reduced_density(&keep)?;
            self.receiver_views.push((self.stage, rho));
        }
        Ok(())
    }

    fn deliver(&mut self) -> Result<()> {
        let view = self.bob_view.as_mut().expect("bob view exists once measured");
        while let Some(msg) = self.channel.pop_front() {
            view.receive(&msg)?;
            self.delivered.push(msg);
        }
        Ok(())
    }

    /// Advances one stage.
    pub fn step(&mut self) -> Result<Stage> {
        match self.stage {
            Stage::Prepared => {
                self.snapshot()?;
                self.register = self.alice.encode(&self.register)?;
                self.stage = Stage::Encoded;
                self.snapshot()?;
            }
            Stage::Encoded => {
                for r in &self.receivers {
                    r.rotate(&mut self.register)?;
                }
                self.stage = Stage::Rotated;
                self.snapshot()?;
            }
            Stage::Rotated => {
                for r in &mut self.receivers {
                    self.register = r.measure(&self.register, &mut self.rng)?;
                }
                self.bob_view = Some(BobView::new(self.config.n(), &self.receivers[self.bob]));
                self.stage = Stage::Measured;
                self.snapshot()?;
            }
            Stage::Measured => {
                self.alice.finalize(&self.register, &mut self.rng)?;
                self.stage = Stage::Finalized;
            }
            Stage::Finalized => {
                let out = self.alice.outbox(PartyId::Bob(self.bob));
                self.channel.extend(out);
                self.deliver()?;
                self.stage = Stage::AliceSent;
            }
            Stage::AliceSent => {
                for r in &self.receivers {
                    self.channel.extend(r.outbox(self.bob));
                }
                self.deliver()?;
                self.stage = Stage::Disclosed;
            }
            Stage::Disclosed => {
                let view = self.bob_view.as_ref().expect("bob view exists once measured");
                let (qubit, action) = view.recover()?;
                let fidelity = self.config.message().fidelity_up_to_phase(&qubit)?;
                self.result = Some((action, fidelity));
                self.stage = Stage::Done;
            }
            Stage::Done => {}
        }
        Ok(self.stage)
    }

    pub fn run(mut self) -> Result<Transcript> {
        while self.step()? != Stage::Done {}
        let (bob_action, fidelity) = self.result.expect("set when done");
        Ok(Transcript {
            receivers: self.config.n(),
            bob: self.bob,
            cooperating: self.cooperating,
            messages: self.delivered,
            bob_action,
            fidelity,
        })
    }

    /// Runs to completion and also returns the recorded receiver views.
    pub fn run_with_views(mut self) -> Result<(Transcript, Vec<(Stage, DensityMatrix)>)> {
        while self.step()? != Stage::Done {}
        let views = std::mem::take(&mut self.receiver_views);
        Ok((self.run()?, views))
    }
}

/// One sampled secret-sharing run with the given parties cooperating.
pub fn run_secret_sharing(
    config: &ScenarioConfig,
    bob: usize,
    cooperating: &[PartyId],
    seed: u64,
) -> Result<Transcript> {
    Session::new(config, bob, cooperating, seed)?.run()
}

/// Where the message comes from in each averaging trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MessageFamily {
    /// The template's own message, every trial.
    Fixed,
    /// Real amplitudes: ϑ uniform on `[0, π]`, ϕ = 0.
    Real,
    /// ϑ uniform on `[0, π]`, ϕ uniform on `[0, 2π)`.
    Uniform,
    /// `(|0⟩ ± i|1⟩)/√2`, sign chosen at random.
    SigmaYEigenstates,
}

impl MessageFamily {
    fn draw(&self, template: &ScenarioConfig, rng: &mut dyn RngCore) -> Result<ScenarioConfig> {
        let bloch = match self {
            MessageFamily::Fixed => return Ok(template.clone()),
            MessageFamily::Real => BlochState::new(PI * rng.random::<f64>(), 0.0)?,
            MessageFamily::Uniform => {
                BlochState::new(PI * rng.random::<f64>(), 2.0 * PI * rng.random::<f64>())?
            }
            MessageFamily::SigmaYEigenstates => {
                let varphi = if rng.random::<bool>() { PI / 2.0 } else { 1.5 * PI };
                BlochState::new(PI / 2.0, varphi)?
            }
        };
        let (alpha, beta) = bloch.amplitudes();
        template.with_message(alpha, beta)
    }
}

/// Mean reconstruction fidelity when receiver `withholder` keeps quiet.
///
/// Each trial redraws the withheld angle uniformly from `[0, π)` and the
/// message from `family`, then runs a full session in which everyone except
/// the withholder cooperates.
pub fn non_cooperation_average(
    template: &ScenarioConfig,
    bob: usize,
    withholder: usize,
    trials: usize,
    seed: u64,
    family: MessageFamily,
) -> Result<FidelityStats> {
    let n = template.n();
    if bob >= n || withholder >= n {
        return Err(invalid(format!("receiver index out of range for {n} receivers")));
    }
    if withholder == bob {
        return Err(invalid("Bob's own data is local; he cannot withhold it from himself"));
    }
    let cooperating: Vec<PartyId> = full_cooperation(n)
        .into_iter()
        .filter(|p| *p != PartyId::Receiver(withholder))
        .collect();
    analysis::block_estimate(trials, seed, |rng| {
        let mut thetas = template.thetas().to_vec();
        thetas[withholder] = PI * rng.random::<f64>();
        let config = family.draw(template, rng)?.with_thetas(thetas)?;
        let run_seed = rng.next_u64();
        Ok(run_secret_sharing(&config, bob, &cooperating, run_seed)?.fidelity)
    })
}

/// One protocol-conformance problem found in a transcript.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Offending message, when the problem is tied to one.
    pub message: Option<usize>,
    pub reason: String,
}

impl Violation {
    fn at(index: usize, reason: impl Into<String>) -> Self {
        Self {
            message: Some(index),
            reason: reason.into(),
        }
    }

    fn global(reason: impl Into<String>) -> Self {
        Self {
            message: None,
            reason: reason.into(),
        }
    }
}

/// Checks provenance, routing and phase order. Empty for conformant runs.
pub fn validate_transcript(t: &Transcript) -> Vec<Violation> {
    let mut out = Vec::new();
    if !(t.fidelity.is_finite() && (0.0..=1.0 + NORM_TOL).contains(&t.fidelity)) {
        out.push(Violation::global(format!("fidelity {} outside [0, 1]", t.fidelity)));
    }
    if t.bob >= t.receivers {
        out.push(Violation::global(format!(
            "bob index {} out of range for {} receivers",
            t.bob, t.receivers
        )));
        return out;
    }
    let bob = PartyId::Bob(t.bob);
    let is_cooperating = |p: PartyId| t.cooperating.contains(&p);

    let mut last_phase = None;
    let mut transfers = 0;
    let mut disclosed = vec![(0usize, 0usize); t.receivers];
    for (i, msg) in t.messages.iter().enumerate() {
        if msg.payload.phase() != msg.phase {
            out.push(Violation::at(i, "phase label does not match payload"));
        }
        if let Some(prev) = last_phase {
            if msg.phase < prev {
                out.push(Violation::at(i, format!("{:?} message after {:?} phase", msg.phase, prev)));
            }
        }
        last_phase = Some(last_phase.map_or(msg.phase, |p: Phase| p.max(msg.phase)));
        if msg.to != bob {
            out.push(Violation::at(i, format!("message addressed to {} instead of Bob", msg.to)));
        }
        match (&msg.payload, msg.from) {
            (Payload::AliceOutcome { bit }, PartyId::Alice) => {
                if *bit > 1 {
                    out.push(Violation::at(i, "outcome is not a bit"));
                }
                if !is_cooperating(PartyId::Alice) {
                    out.push(Violation::at(i, "non-cooperating Alice sent her outcome"));
                }
            }
            (Payload::QubitTransfer { amplitudes }, PartyId::Alice) => {
                transfers += 1;
                let norm: f64 = amplitudes.iter().map(|[re, im]| re * re + im * im).sum();
                if (norm - 1.0).abs() > NORM_TOL {
                    out.push(Violation::at(i, "transferred qubit is not normalized"));
                }
            }
            (Payload::AngleDisclosure { .. } | Payload::OutcomeDisclosure { .. }, PartyId::Bob(_)) => {
                out.push(Violation::at(i, "Bob disclosed his own data"));
            }
            (payload @ (Payload::AngleDisclosure { .. } | Payload::OutcomeDisclosure { .. }), PartyId::Receiver(r)) => {
                if r >= t.receivers {
                    out.push(Violation::at(i, format!("unknown receiver {r}")));
                    continue;
                }
                if r == t.bob {
                    out.push(Violation::at(i, "Bob disclosed his own data"));
                    continue;
                }
                if !is_cooperating(PartyId::Receiver(r)) {
                    out.push(Violation::at(i, format!("non-cooperating receiver {r} sent data")));
                }
                let slot = &mut disclosed[r];
                match payload {
                    Payload::AngleDisclosure { theta } => {
                        slot.0 += 1;
                        if !theta.is_finite() {
                            out.push(Violation::at(i, "angle is not finite"));
                        }
                    }
                    Payload::OutcomeDisclosure { bit } => {
                        slot.1 += 1;
                        if *bit > 1 {
                            out.push(Violation::at(i, "outcome is not a bit"));
                        }
                    }
                    _ => unreachable!(),
                }
                if slot.0 > 1 || slot.1 > 1 {
                    out.push(Violation::at(i, format!("receiver {r} disclosed twice")));
                }
            }
            (payload, from) => {
                out.push(Violation::at(
                    i,
                    format!("{:?} may not originate from {from}", payload.phase()),
                ));
            }
        }
    }
    match transfers {
        1 => {}
        0 => out.push(Violation::global("qubit a was never transferred to Bob")),
        _ => out.push(Violation::global("qubit a transferred more than once")),
    }
    out
}

/// Receivers' joint reduced state at each quantum stage, for two messages run
/// with the same seed. Used to check that nothing about the message reaches
/// the receivers before Alice's transfer.
pub fn receiver_view_gap(
    config: &ScenarioConfig,
    other_alpha: Complex64,
    other_beta: Complex64,
    seed: u64,
) -> Result<f64> {
    let other = config.with_message(other_alpha, other_beta)?;
    let all = full_cooperation(config.n());
    let (_, a) = Session::new(config, 0, &all, seed)?.record_receiver_views().run_with_views()?;
    let (_, b) = Session::new(&other, 0, &all, seed)?.record_receiver_views().run_with_views()?;
    let mut worst = 0.0_f64;
    for ((sa, ra), (sb, rb)) in a.iter().zip(&b) {
        debug_assert_eq!(sa, sb);
        worst = worst.max(ra.trace_distance(rb)?);
    }
    Ok(worst)
}

/// Receivers' leakage right after encoding, read through a session.
pub fn encoded_receiver_leakage(config: &ScenarioConfig) -> Result<f64> {
    let mut s = Session::new(config, 0, &full_cooperation(config.n()), 0)?;
    s.step()?;
    analysis::receiver_leakage_of(&s.register, config.n())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(thetas: &[f64]) -> ScenarioConfig {
        ScenarioConfig::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), thetas.to_vec()).unwrap()
    }

    #[test]
    fn honest_run_is_clean() {
        let cfg = config(&[0.4, 1.2, 2.5]);
        let t = run_secret_sharing(&cfg, 1, &full_cooperation(3), 7).unwrap();
        assert!(validate_transcript(&t).is_empty(), "{:?}", validate_transcript(&t));
        assert!((t.fidelity - 1.0).abs() < 1e-10);
        assert!(matches!(t.bob_action, BobAction::Recovered { .. }));
        // Alice outcome, transfer, 2 × (angle, outcome)
        assert_eq!(t.messages.len(), 6);
        assert!(!t.interceptor_can_compute_phi());
    }

    #[test]
    fn bob_out_of_range() {
        let cfg = config(&[0.4]);
        assert!(run_secret_sharing(&cfg, 1, &full_cooperation(1), 0).is_err());
    }

    #[test]
    fn alice_message_from_receiver_is_flagged() {
        let cfg = config(&[0.4, 1.2]);
        let mut t = run_secret_sharing(&cfg, 0, &full_cooperation(2), 3).unwrap();
        t.messages.push(ClassicalMessage {
            phase: Phase::Disclosure,
            from: PartyId::Alice,
            to: PartyId::Bob(0),
            payload: Payload::AngleDisclosure { theta: 0.1 },
        });
        assert_eq!(validate_transcript(&t).len(), 1);
    }

    #[test]
    fn missing_transfer_is_flagged() {
        let cfg = config(&[0.4, 1.2]);
        let mut t = run_secret_sharing(&cfg, 0, &full_cooperation(2), 3).unwrap();
        t.messages.retain(|m| m.phase != Phase::QubitTransfer);
        t.fidelity = 1.0;
        assert_eq!(validate_transcript(&t).len(), 1);
    }

    #[test]
    fn out_of_order_is_flagged() {
        let cfg = config(&[0.4, 1.2]);
        let mut t = run_secret_sharing(&cfg, 0, &full_cooperation(2), 3).unwrap();
        t.messages.rotate_left(1);
        assert!(!validate_transcript(&t).is_empty());
    }

    #[test]
    fn withholder_messages_absent() {
        let cfg = config(&[0.4, 1.2, 0.9]);
        let coop = vec![PartyId::Alice, PartyId::Receiver(1)];
        let t = run_secret_sharing(&cfg, 0, &coop, 5).unwrap();
        assert!(t.messages.iter().all(|m| m.from != PartyId::Receiver(2)));
        assert!(matches!(t.bob_action, BobAction::Fallback { .. }));
        assert!(validate_transcript(&t).is_empty());
    }

    #[test]
    fn json_roundtrip() {
        let cfg = config(&[0.4, 1.2]);
        let t = run_secret_sharing(&cfg, 1, &full_cooperation(2), 11).unwrap();
        let back: Transcript = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(back, t);
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["messages"][0]["phase"], "alice-outcome");
        assert_eq!(v["messages"][0]["from"]["role"], "alice");
        assert_eq!(v["messages"][0]["to"]["role"], "bob");
        assert_eq!(v["messages"][0]["to"]["index"], 1);
    }

    #[test]
    fn withholding_bob_rejected() {
        let cfg = config(&[0.4, 1.2]);
        assert!(non_cooperation_average(&cfg, 0, 0, 10, 1, MessageFamily::Fixed).is_err());
    }
}
