//! Resolving the map of a scenario from a builtin name or graph/map files.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use hyperdyn_core::formats::{parse_graph, parse_map};
use hyperdyn_core::pl_map::markov::MarkovMap;
use hyperdyn_core::{catalog, PLMap};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Rounds of grid refinement tried when a map file carries no grid.
const MARKOV_ROUNDS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct LoadedMap {
    pub name: String,
    pub map: PLMap,
    pub markov: Option<MarkovMap>,
    pub approximate: bool,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

impl MapSource {
    pub fn builtin(name: &str) -> Self {
        MapSource {
            builtin: Some(name.to_string()),
            ..MapSource::default()
        }
    }

    /// Loads the map; relative file paths resolve against `base`.
    pub fn load(&self, base: &Path) -> CliResult<LoadedMap> {
        match (&self.builtin, &self.graph, &self.map) {
            (Some(name), None, None) => {
                let b = catalog::lookup(name)?;
                Ok(LoadedMap {
                    name: b.name,
                    map: b.map,
                    markov: b.markov,
                    approximate: b.approximate,
                })
            }
            (None, Some(gpath), Some(mpath)) => {
                let gpath = base.join(gpath);
                let mpath = base.join(mpath);
                let graph = parse_graph(&read(&gpath)?).map_err(|source| CliError::File {
                    path: gpath.clone(),
                    source,
                })?;
                let parsed = parse_map(&read(&mpath)?, Arc::new(graph)).map_err(|source| CliError::File {
                    path: mpath.clone(),
                    source,
                })?;
                let markov = match parsed.markov {
                    Some(mm) => Some(mm),
                    None => MarkovMap::close(parsed.map.clone(), MARKOV_ROUNDS).ok(),
                };
                Ok(LoadedMap {
                    name: mpath.display().to_string(),
                    map: parsed.map,
                    markov,
                    approximate: false,
                })
            }
            _ => Err(CliError::Invalid(
                "map needs either `builtin` or both `graph` and `map`".into(),
            )),
        }
    }
}
