//! The JSON scenario file.

use std::path::Path;

use serde::{Deserialize, Serialize};
use telerot_core::protocol::Mode;
use telerot_core::{BlochState, Complex64, ScenarioConfig};

use crate::CliError;

/// How the message qubit is written down.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MessageSpec {
    /// `[[re, im], [re, im]]` for α and β; must be normalized.
    Amplitudes([[f64; 2]; 2]),
    /// Polar and azimuthal Bloch angles, radians.
    Bloch { vartheta: f64, varphi: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub message: MessageSpec,
    /// One rotation angle per receiver, radians.
    pub thetas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("malformed config: {e}")))
    }

    pub fn amplitudes(&self) -> Result<(Complex64, Complex64), CliError> {
        match self.message {
            MessageSpec::Amplitudes([[ar, ai], [br, bi]]) => {
                Ok((Complex64::new(ar, ai), Complex64::new(br, bi)))
            }
            MessageSpec::Bloch { vartheta, varphi } => Ok(BlochState::new(vartheta, varphi)
                .map_err(|e| CliError::Config(e.to_string()))?
                .amplitudes()),
        }
    }

    /// Validated scenario; `seed` overrides the file's seed when given.
    pub fn scenario(&self, seed: Option<u64>) -> Result<ScenarioConfig, CliError> {
        let (alpha, beta) = self.amplitudes()?;
        let config = ScenarioConfig::new(alpha, beta, self.thetas.clone())
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(config
            .with_seed(seed.or(self.seed).unwrap_or(0))
            .with_mode(self.mode.unwrap_or_default()))
    }
}
