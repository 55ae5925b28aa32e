use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use norbrack_core::curves::{self, FourierCurve};
use norbrack_core::{io, Ambient, DiscreteImmersion};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Torsion,
    Variation,
    Bracket,
    Spanning,
    Oneform,
    Arc,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Torsion, Suite::Variation, Suite::Bracket, Suite::Spanning, Suite::Oneform, Suite::Arc];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Torsion => "torsion",
            Suite::Variation => "variation",
            Suite::Bracket => "bracket",
            Suite::Spanning => "spanning",
            Suite::Oneform => "oneform",
            Suite::Arc => "arc",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Suite::Torsion => "connection bracket vs flow commutator for normal-field pairs",
            Suite::Variation => "variation of the unit normal vs central differences",
            Suite::Bracket => "closed-form normal bracket vs numeric bracket",
            Suite::Spanning => "rank of normal fields plus their brackets",
            Suite::Oneform => "decomposition of random one-forms into a db - b da terms",
            Suite::Arc => "leaf invariant of projected flows and Frobenius defect",
        }
    }

    fn default_epsilon(self) -> f64 {
        match self {
            Suite::Bracket => 1e-5,
            _ => 1e-4,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown suite `{s}`")))
    }
}

/// A curve family entry of the config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Circle {
        #[serde(default = "one")]
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    Fourier {
        seed: Option<u64>,
        #[serde(default = "default_fourier_modes")]
        modes: usize,
        #[serde(default = "default_decay")]
        decay: f64,
    },
    GreatCircle,
    SmallCircle {
        height: f64,
    },
    File {
        path: PathBuf,
    },
}

fn one() -> f64 {
    1.0
}

fn default_fourier_modes() -> usize {
    5
}

fn default_decay() -> f64 {
    2.0
}

impl CurveSpec {
    pub fn label(&self, seed: u64) -> String {
        match self {
            CurveSpec::Circle { radius } => format!("circle(r={radius})"),
            CurveSpec::Ellipse { a, b } => format!("ellipse({a},{b})"),
            CurveSpec::Fourier { seed: s, modes, decay } => {
                format!("fourier(seed={},modes={modes},decay={decay})", s.unwrap_or(seed))
            }
            CurveSpec::GreatCircle => "great_circle".into(),
            CurveSpec::SmallCircle { height } => format!("small_circle(z={height})"),
            CurveSpec::File { path } => format!("file({})", path.display()),
        }
    }

    pub fn ambient(&self) -> Option<Ambient> {
        match self {
            CurveSpec::Circle { .. } | CurveSpec::Ellipse { .. } | CurveSpec::Fourier { .. } => Some(Ambient::Plane),
            CurveSpec::GreatCircle | CurveSpec::SmallCircle { .. } => Some(Ambient::Sphere),
            CurveSpec::File { .. } => None,
        }
    }

    pub fn build(&self, n: usize, seed: u64) -> norbrack_core::Result<DiscreteImmersion> {
        match self {
            CurveSpec::Circle { radius } => curves::circle(n, *radius),
            CurveSpec::Ellipse { a, b } => curves::ellipse(n, *a, *b),
            CurveSpec::Fourier { seed: s, modes, decay } => {
                FourierCurve::new(s.unwrap_or(seed), n, *modes, *decay).generate()
            }
            CurveSpec::GreatCircle => curves::great_circle(n),
            CurveSpec::SmallCircle { height } => curves::small_circle(n, *height),
            CurveSpec::File { path } => io::read_curve(path),
        }
    }
}

/// The config file as written by the user; every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub suite: Option<Suite>,
    pub grid_n: Option<usize>,
    pub modes: Option<usize>,
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub tolerances: BTreeMap<Suite, f64>,
    pub curves: Option<Vec<CurveSpec>>,
    pub ambient: Option<Ambient>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub cases: Option<usize>,
    pub trajectory_dir: Option<PathBuf>,
}

impl RawConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_owned(), source })?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub suite: Option<Suite>,
    pub out: Option<PathBuf>,
    pub grid_n: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub grid_n: usize,
    pub modes: Option<usize>,
    pub epsilon: f64,
    pub tolerance: Option<f64>,
    pub curves: Vec<CurveSpec>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub cases: usize,
    pub trajectory_dir: Option<PathBuf>,
}

fn default_curves(suite: Suite, ambient: Option<Ambient>) -> Vec<CurveSpec> {
    let plane = vec![
        CurveSpec::Circle { radius: 1.0 },
        CurveSpec::Ellipse { a: 2.0, b: 1.0 },
        CurveSpec::Fourier { seed: None, modes: 5, decay: 2.0 },
    ];
    let sphere = vec![CurveSpec::GreatCircle, CurveSpec::SmallCircle { height: 0.5 }];
    match (suite, ambient) {
        (Suite::Spanning | Suite::Arc | Suite::Oneform, _) | (_, Some(Ambient::Plane)) => plane,
        (_, Some(Ambient::Sphere)) => sphere,
        (_, None) => plane.into_iter().chain(sphere).collect(),
    }
}

impl SuiteConfig {
    pub fn resolve(raw: RawConfig, overrides: Overrides) -> Result<Self, ConfigError> {
        let suite = overrides.suite.or(raw.suite).ok_or_else(|| ConfigError::Invalid("no suite given".into()))?;
        let default_n = if suite == Suite::Spanning { 16 } else { 256 };
        let grid_n = overrides.grid_n.or(raw.grid_n).unwrap_or(default_n);
        if grid_n < 8 || !grid_n.is_multiple_of(2) {
            return Err(ConfigError::Invalid(format!("grid_n = {grid_n} must be even and at least 8")));
        }
        let epsilon = raw.epsilon.unwrap_or(suite.default_epsilon());
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(ConfigError::Invalid(format!("epsilon = {epsilon} must be positive")));
        }
        if let Some((s, t)) = raw.tolerances.iter().find(|(_, t)| !(**t > 0.0 && t.is_finite())) {
            return Err(ConfigError::Invalid(format!("tolerance for {s} = {t} must be positive")));
        }
        let curves = match raw.curves {
            Some(c) if c.is_empty() => return Err(ConfigError::Invalid("curve list is empty".into())),
            Some(c) => c,
            None => default_curves(suite, raw.ambient),
        };
        if let Some(ambient) = raw.ambient {
            if let Some(bad) = curves.iter().find(|c| c.ambient().is_some_and(|a| a != ambient)) {
                return Err(ConfigError::Invalid(format!(
                    "curve {} is not in the {} ambient",
                    bad.label(0),
                    ambient.name()
                )));
            }
        }
        let cases = raw.cases.unwrap_or(20);
        if cases == 0 {
            return Err(ConfigError::Invalid("cases must be positive".into()));
        }
        Ok(SuiteConfig {
            suite,
            grid_n,
            modes: raw.modes,
            epsilon,
            tolerance: raw.tolerances.get(&suite).copied(),
            curves,
            out: overrides.out.or(raw.out),
            seed: overrides.seed.or(raw.seed).unwrap_or(1),
            cases,
            trajectory_dir: raw.trajectory_dir,
        })
    }
}
