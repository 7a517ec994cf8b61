//! Scenario files (TOML).
//!
//! ```toml
//! name = "star"
//! seed = 1
//!
//! [map]
//! builtin = "star-3-4-2-5"
//!
//! [continua]
//! A = "{ a1_0:[0,1], a2_0:[0,1] }"
//!
//! [[analyses]]
//! kind = "detect-period"
//! continuum = "A"
//!
//! [output]
//! report = "out/star.json"
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hyperdyn_core::rational::{self, Rational};
use hyperdyn_core::{formats, Continuum, Graph};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::source::MapSource;

/// Upper bound accepted for any horizon or sample count.
pub const MAX_HORIZON: usize = 1_000_000;
pub const MAX_CORPUS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSource>,
    /// Named continuum literals referenced by analyses.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub continua: BTreeMap<String, String>,
    #[serde(default)]
    pub analyses: Vec<Analysis>,
    #[serde(default, skip_serializing_if = "Output::is_empty")]
    pub output: Output,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_dir: Option<PathBuf>,
}

impl Output {
    fn is_empty(&self) -> bool {
        self.report.is_none() && self.csv_dir.is_none()
    }
}

/// One analysis. Continuum fields name an entry of `continua` or hold a
/// literal directly; rationals are `p/q` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Analysis {
    Classify {
        continuum: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<String>,
    },
    DetectPeriod {
        continuum: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<usize>,
    },
    /// Single continuum when given, otherwise every enumerated periodic
    /// subtree of the map.
    PeriodBound {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        continuum: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<usize>,
    },
    Nesting {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p1: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p2: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<usize>,
    },
    Recurrence {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        continuum: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<String>,
    },
    CycleOfGraphs {
        continuum: String,
        period: usize,
    },
    Center {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_depth: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<usize>,
    },
    Equicontinuity {
        subtree: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eps: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gammas: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        samples: Option<usize>,
    },
    EnumeratePeriodic {},
    /// Period bound and nesting over random Markov tree maps.
    Corpus {
        count: usize,
    },
    Trichotomy {
        pairs: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        denominator: Option<i64>,
    },
}

impl Analysis {
    pub fn kind(&self) -> &'static str {
        match self {
            Analysis::Classify { .. } => "classify",
            Analysis::DetectPeriod { .. } => "detect-period",
            Analysis::PeriodBound { .. } => "period-bound",
            Analysis::Nesting { .. } => "nesting",
            Analysis::Recurrence { .. } => "recurrence",
            Analysis::CycleOfGraphs { .. } => "cycle-of-graphs",
            Analysis::Center { .. } => "center",
            Analysis::Equicontinuity { .. } => "equicontinuity",
            Analysis::EnumeratePeriodic {} => "enumerate-periodic",
            Analysis::Corpus { .. } => "corpus",
            Analysis::Trichotomy { .. } => "trichotomy",
        }
    }

    /// Whether the analysis reads the scenario map.
    pub fn needs_map(&self) -> bool {
        !matches!(self, Analysis::Corpus { .. } | Analysis::Trichotomy { .. })
    }

    fn horizon(&self) -> Option<usize> {
        match self {
            Analysis::Classify { horizon, .. }
            | Analysis::DetectPeriod { horizon, .. }
            | Analysis::PeriodBound { horizon, .. }
            | Analysis::Nesting { horizon, .. }
            | Analysis::Recurrence { horizon, .. }
            | Analysis::Center { horizon, .. }
            | Analysis::Equicontinuity { horizon, .. }
            | Analysis::Trichotomy { horizon, .. } => *horizon,
            _ => None,
        }
    }

    fn rationals(&self) -> Vec<&str> {
        match self {
            Analysis::Classify { tol, .. } | Analysis::Recurrence { tol, .. } | Analysis::Trichotomy { tol, .. } => {
                tol.iter().map(String::as_str).collect()
            }
            Analysis::Equicontinuity { eps, gammas, .. } => eps
                .iter()
                .chain(gammas.iter().flatten())
                .map(String::as_str)
                .collect(),
            _ => Vec::new(),
        }
    }
}

/// Parses a positive rational parameter.
pub fn positive(text: &str, what: &str) -> CliResult<Rational> {
    let r = rational::parse(text)?;
    if r <= rational::zero() {
        return Err(CliError::Invalid(format!("{what} must be positive, got {text}")));
    }
    Ok(r)
}

impl Scenario {
    pub fn from_toml(text: &str, path: &Path) -> CliResult<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| CliError::Scenario {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        s.validate().map_err(|e| CliError::Scenario {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Ok(s)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Scenario::from_toml(&text, path)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenarios serialize")
    }

    /// Range checks that do not need the map.
    pub fn validate(&self) -> CliResult<()> {
        if self.name.trim().is_empty() {
            return Err(CliError::Invalid("name must not be empty".into()));
        }
        for a in &self.analyses {
            let kind = a.kind();
            if let Some(h) = a.horizon() {
                if h == 0 || h > MAX_HORIZON {
                    return Err(CliError::Invalid(format!("{kind}: horizon {h} outside 1..={MAX_HORIZON}")));
                }
            }
            for r in a.rationals() {
                positive(r, kind)?;
            }
            match a {
                Analysis::CycleOfGraphs { period, .. } if *period == 0 => {
                    return Err(CliError::Invalid("cycle-of-graphs: period must be at least 1".into()))
                }
                Analysis::Corpus { count } if *count == 0 || *count > MAX_CORPUS => {
                    return Err(CliError::Invalid(format!("corpus: count outside 1..={MAX_CORPUS}")))
                }
                Analysis::Trichotomy { pairs, denominator, .. } => {
                    if *pairs == 0 || *pairs > MAX_CORPUS {
                        return Err(CliError::Invalid(format!("trichotomy: pairs outside 1..={MAX_CORPUS}")));
                    }
                    if denominator.is_some_and(|d| d < 1) {
                        return Err(CliError::Invalid("trichotomy: denominator must be positive".into()));
                    }
                }
                Analysis::Equicontinuity { samples: Some(0), .. } => {
                    return Err(CliError::Invalid("equicontinuity: samples must be positive".into()))
                }
                _ => {}
            }
            if a.needs_map() && self.map.is_none() {
                return Err(CliError::Invalid(format!("{kind} needs a [map] section")));
            }
        }
        if let Some(m) = &self.map {
            if let Some(b) = &m.builtin {
                hyperdyn_core::catalog::lookup(b)?;
            }
        }
        Ok(())
    }

    /// Resolves a continuum reference: a key of `continua` or a literal.
    pub fn continuum(&self, reference: &str, g: &Graph) -> CliResult<Continuum> {
        let text = match self.continua.get(reference) {
            Some(lit) => lit.as_str(),
            None if reference.trim_start().starts_with('{') => reference,
            None => return Err(CliError::Invalid(format!("unknown continuum `{reference}`"))),
        };
        Ok(formats::parse_continuum(text, g)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const STAR: &str = r#"
name = "star"
seed = 4

[map]
builtin = "star-3-4-2-5"

[continua]
A = "{ a1_0:[0,1], a2_0:[0,1] }"

[[analyses]]
kind = "detect-period"
continuum = "A"

[[analyses]]
kind = "classify"
continuum = "{ a1_0:[0,1/2] }"
tol = "1/1000"
"#;

    #[test]
    fn parses_and_round_trips() {
        let s = Scenario::from_toml(STAR, Path::new("star.toml")).unwrap();
        assert_eq!(s.analyses.len(), 2);
        assert_eq!(s.seed, Some(4));
        let again = Scenario::from_toml(&s.to_toml(), Path::new("again.toml")).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        let bad = STAR.replace("tol = \"1/1000\"", "tol = \"-1\"");
        assert!(Scenario::from_toml(&bad, Path::new("x")).is_err());
        let bad = STAR.replace("builtin = \"star-3-4-2-5\"", "builtin = \"no-such-map\"");
        assert!(Scenario::from_toml(&bad, Path::new("x")).is_err());
        let bad = STAR.replace("kind = \"detect-period\"", "kind = \"detect-period\"\nhorizon = 0");
        assert!(Scenario::from_toml(&bad, Path::new("x")).is_err());
        let bad = format!("{STAR}\nunexpected = 1\n");
        assert!(Scenario::from_toml(&bad, Path::new("x")).is_err());
    }

    #[test]
    fn map_is_required_only_when_used() {
        let s = "name = \"c\"\n[[analyses]]\nkind = \"corpus\"\ncount = 3\n";
        assert!(Scenario::from_toml(s, Path::new("x")).is_ok());
        let s = "name = \"c\"\n[[analyses]]\nkind = \"enumerate-periodic\"\n";
        assert!(Scenario::from_toml(s, Path::new("x")).is_err());
    }
}
