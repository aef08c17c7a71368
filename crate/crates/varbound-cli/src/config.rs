//! JSON configuration types for the `sweep`, `fuzz`, and `multi` subcommands.
//! Angles are always radians; there is no degrees option.

use serde::{Deserialize, Serialize};
use varbound::systems::SystemName;

/// Uniform grid over one angle. `count == 1` pins the angle at `start`
/// (used for fixed-phase sweeps); otherwise `start < stop` is required and
/// both endpoints are included.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn validate(&self, name: &str) -> Result<(), String> {
        if self.count == 0 {
            return Err(format!("{name}.count must be at least 1"));
        }
        if self.count >= 2 && self.start >= self.stop {
            return Err(format!("{name}: start must be below stop when count >= 2"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.start + step * k as f64).collect()
    }
}

/// Which baseline bounds to emit.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct BaselineFlags {
    pub robertson: bool,
    pub schrodinger: bool,
    pub maccone_pati: bool,
    pub reverse_cov: bool,
}

impl Default for BaselineFlags {
    fn default() -> Self {
        Self { robertson: true, schrodinger: true, maccone_pati: true, reverse_cov: true }
    }
}

fn default_families() -> Vec<u8> {
    vec![1, 2, 3, 4]
}

/// Configuration for a (theta, phi) sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepConfig {
    pub system: String,
    pub theta_grid: GridSpec,
    pub phi_grid: GridSpec,
    #[serde(default = "default_families")]
    pub families: Vec<u8>,
    #[serde(default)]
    pub baselines: BaselineFlags,
    #[serde(default)]
    pub orthogonalize: bool,
    #[serde(default)]
    pub cutoff: Option<usize>,
    #[serde(default)]
    pub output_path: Option<String>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<SystemName, String> {
        let name = SystemName::parse(&self.system)
            .ok_or_else(|| format!("system: unknown value {:?}", self.system))?;
        self.theta_grid.validate("thetaGrid")?;
        self.phi_grid.validate("phiGrid")?;
        if self.families.is_empty() {
            return Err("families must be nonempty".to_string());
        }
        let mut sorted = self.families.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.iter().any(|f| !(1..=4).contains(f)) {
            return Err("families entries must lie in 1..=4".to_string());
        }
        Ok(name)
    }

    /// Sorted, deduplicated family list.
    pub fn family_list(&self) -> Vec<u8> {
        let mut sorted = self.families.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted
    }
}

/// Configuration for the `multi` subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MultiConfig {
    pub system: String,
    pub theta: f64,
    pub phi: f64,
    /// Observable tokens: "a", "b", or "aux" (J_z for spin1, K_z for su11).
    #[serde(default = "default_observables")]
    pub observables: Vec<String>,
    /// Unit coefficients, one per observable: "+1", "-1", "+i", "-i".
    /// Ignored when `search` is set.
    #[serde(default)]
    pub coefficients: Option<Vec<String>>,
    /// Use the system's companion state for the orthogonal-projection form.
    #[serde(default)]
    pub use_orthogonal: bool,
    #[serde(default)]
    pub orthogonalize: bool,
    /// "max_std" (default) or "min_std" bracket in the orthogonal upper bound.
    #[serde(default)]
    pub upper_variant: Option<String>,
    /// When true, exhaustively search coefficients instead of using the
    /// `coefficients` field.
    #[serde(default)]
    pub search: bool,
    /// "max_lower" (default) or "min_upper".
    #[serde(default)]
    pub goal: Option<String>,
    #[serde(default)]
    pub cutoff: Option<usize>,
}

fn default_observables() -> Vec<String> {
    vec!["a".to_string(), "b".to_string()]
}
