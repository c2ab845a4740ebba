use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::elliptic::{CurveQ, FormalPoint, MWPresentation, RationalPoint};
use crate::module::ModuleSource;
use crate::order::{fixtures, NormalizedOrder, OrderSpec};

pub const MAX_PRIME: u64 = 1_000_000;
/// Rational heights grow with the coefficients; larger inputs are refused.
pub const MAX_FORMAL_COEFF: i64 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Gajda,
    Support,
    Algebra,
}

/// Generators modulo torsion and the full torsion list, identity first.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MwSection {
    pub generators: Vec<RationalPoint>,
    #[serde(default)]
    pub torsion_points: Vec<RationalPoint>,
}

fn default_prime_min() -> u64 {
    5
}

fn default_prime_max() -> u64 {
    1000
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveQ>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mw: Option<MwSection>,
    #[serde(default)]
    pub sigma_generators: Vec<FormalPoint>,
    /// Declares `E(Q)_tors ⊆ Σ`, so the lattice side tests `x ∈ Σ` itself.
    #[serde(default)]
    pub sigma_contains_torsion: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<FormalPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<FormalPoint>,
    #[serde(default = "default_prime_min")]
    pub prime_min: u64,
    #[serde(default = "default_prime_max")]
    pub prime_max: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraConfig>,
    /// Directory that relative fixture paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        serde_json::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        if self.mode == Mode::Algebra {
            if self.algebra.is_none() {
                return bad("algebra mode needs an \"algebra\" section".into());
            }
            return Ok(());
        }
        if self.prime_min > self.prime_max || self.prime_max > MAX_PRIME {
            return bad(format!(
                "need prime_min <= prime_max <= {MAX_PRIME}, got [{}, {}]",
                self.prime_min, self.prime_max
            ));
        }
        let mw = self.presentation()?;
        let mut points: Vec<(&str, &FormalPoint)> = self.sigma_generators.iter().map(|s| ("sigma", s)).collect();
        match (&self.x, self.mode) {
            (Some(x), _) => points.push(("x", x)),
            (None, _) => return bad("config needs \"x\"".into()),
        }
        match (&self.y, self.mode) {
            (Some(y), _) => points.push(("y", y)),
            (None, Mode::Support) => return bad("support mode needs \"y\"".into()),
            (None, _) => {}
        }
        for (what, f) in points {
            mw.check_formal(f)
                .map_err(|e| ExperimentError::Config(format!("{what}: {e}")))?;
            if f.max_abs_coeff() > BigInt::from(MAX_FORMAL_COEFF) {
                return bad(format!("{what}: coefficients must satisfy |c| <= {MAX_FORMAL_COEFF}"));
            }
        }
        Ok(())
    }

    pub fn presentation(&self) -> Result<MWPresentation, ExperimentError> {
        let curve = self
            .curve
            .clone()
            .ok_or_else(|| ExperimentError::Config("config needs \"curve\"".into()))?;
        let mw = self
            .mw
            .clone()
            .ok_or_else(|| ExperimentError::Config("config needs \"mw\"".into()))?;
        Ok(MWPresentation::new(curve, mw.generators, mw.torsion_points)?)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }
}

/// Where an order comes from: a built-in fixture, a JSON file, or inline.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderSource {
    Fixture { fixture: String },
    File { file: PathBuf },
    Inline { spec: OrderSpec },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrderEntry {
    pub name: String,
    #[serde(flatten)]
    pub source: OrderSource,
}

impl OrderEntry {
    pub fn load(&self, cfg: &ExperimentConfig) -> Result<NormalizedOrder, ExperimentError> {
        match &self.source {
            OrderSource::Fixture { fixture } => fixtures::by_name(fixture)
                .ok_or_else(|| ExperimentError::Config(format!("unknown fixture order {fixture:?}"))),
            OrderSource::File { file } => {
                let path = cfg.resolve(file);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| ExperimentError::Io(format!("{}: {e}", path.display())))?;
                let spec: OrderSpec = serde_json::from_str(&text)
                    .map_err(|e| ExperimentError::Fixture(format!("{}: {e}", path.display())))?;
                Ok(spec.build()?)
            }
            OrderSource::Inline { spec } => Ok(spec.clone().build()?),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleEntry {
    pub name: String,
    /// Name of an entry in `orders`.
    pub order: String,
    pub module: ModuleSource,
}

fn default_primes() -> Vec<u64> {
    vec![2, 3, 5]
}

fn default_max_n() -> u32 {
    6
}

fn default_random() -> usize {
    100
}

/// The `(α, x, i, a, b)` grid for the obstruction check on finite modules.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvilGrid {
    /// `α` runs over `[-alpha_bound, alpha_bound]^n` in O-coordinates.
    pub alpha_bound: i64,
    /// `a, b ∈ [0, max_exponent]`.
    pub max_exponent: u32,
    /// Modules with at most this many elements use every `x`; larger ones an
    /// evenly spaced selection of this size.
    pub x_limit: usize,
    /// Only modules up to this size are checked.
    pub max_module_size: u64,
}

impl Default for EvilGrid {
    fn default() -> Self {
        EvilGrid {
            alpha_bound: 1,
            max_exponent: 3,
            x_limit: 256,
            max_module_size: 10_000,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraConfig {
    pub orders: Vec<OrderEntry>,
    #[serde(default)]
    pub modules: Vec<ModuleEntry>,
    #[serde(default = "default_primes")]
    pub primes: Vec<u64>,
    #[serde(default = "default_max_n")]
    pub max_n: u32,
    #[serde(default = "default_random")]
    pub random_elements: usize,
    #[serde(default)]
    pub evil: EvilGrid,
}
