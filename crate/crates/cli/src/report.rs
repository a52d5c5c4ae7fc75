//! Report types and their JSON rendering.

use serde::Serialize;
use serde_json::{Number, Value};
use telerot_core::analysis::AverageSpec;
use telerot_core::parties::{MessageFamily, Violation};
use telerot_core::protocol::{Branch, Mode, RecoveryKind};
use telerot_core::{Complex64, FidelityStats, ScenarioConfig, StateVector, Transcript};

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

/// Significant digits kept for every floating-point number in a report.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self {
            name: "telerot",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

pub type Pair = [f64; 2];

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn qubit_pairs(q: &StateVector) -> [Pair; 2] {
    [pair(q.amplitude(0)), pair(q.amplitude(1))]
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub receivers: usize,
    pub alpha: Pair,
    pub beta: Pair,
    pub thetas: Vec<f64>,
    pub mode: Mode,
}

impl From<&ScenarioConfig> for ConfigEcho {
    fn from(c: &ScenarioConfig) -> Self {
        Self {
            receivers: c.n(),
            alpha: pair(c.alpha()),
            beta: pair(c.beta()),
            thetas: c.thetas().to_vec(),
            mode: c.mode(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchReport {
    /// Receiver outcomes as a bit string, receiver 0 first.
    pub pattern: String,
    pub receiver_outcomes: Vec<u8>,
    pub m: usize,
    pub alice_outcome: u8,
    pub probability: f64,
    pub phi: f64,
    /// Qubit `a` before recovery, `[[re, im], [re, im]]`.
    pub final_state: [Pair; 2],
    pub recovery: RecoveryKind,
    pub post_recovery_fidelity: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerateBody {
    pub branches: Vec<BranchReport>,
    pub total_probability: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunBody {
    pub branch: BranchReport,
    pub pre_recovery_fidelity: f64,
    /// Closed-form `F(message, φ)`; only defined for Alice outcome 0.
    pub predicted_pre_recovery_fidelity: Option<f64>,
}

#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMethod {
    MonteCarlo,
    Quadrature,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepBody {
    pub average: AverageSpec,
    pub method: SweepMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statistics: Option<FidelityStats>,
    /// Exact average under the same measure.
    pub analytic: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonCooperation {
    pub withholder: usize,
    pub family: MessageFamily,
    pub trials: usize,
    pub statistics: FidelityStats,
}

#[derive(Clone, Debug, Serialize)]
pub struct SecretShareBody {
    pub transcript: Transcript,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_cooperation: Option<NonCooperation>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Body {
    Enumerate(EnumerateBody),
    Run(RunBody),
    Sweep(SweepBody),
    SecretShare(SecretShareBody),
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub command: &'static str,
    pub seed: Option<u64>,
    pub config: Option<ConfigEcho>,
    #[serde(flatten)]
    pub body: Body,
}

impl RunReport {
    pub fn new(command: &'static str, seed: Option<u64>, config: Option<&ScenarioConfig>, body: Body) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: ToolInfo::default(),
            command,
            seed,
            config: config.map(ConfigEcho::from),
            body,
        }
    }

    /// Pretty JSON with every float rounded to [`SIGNIFICANT_DIGITS`].
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        round_floats(&mut v);
        let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
        s.push('\n');
        s
    }
}

pub fn branch_report(b: &Branch, recovery: RecoveryKind, post_recovery_fidelity: f64) -> BranchReport {
    BranchReport {
        pattern: telerot_core::protocol::bits_to_string(&b.receiver_outcomes),
        receiver_outcomes: b.receiver_outcomes.clone(),
        m: b.m,
        alice_outcome: b.alice_outcome,
        probability: b.probability,
        phi: b.phi,
        final_state: qubit_pairs(&b.final_state),
        recovery,
        post_recovery_fidelity,
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] and folds `-0` into `0`.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            *v = Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}
