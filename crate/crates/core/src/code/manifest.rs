use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{b1, from_alist, generalized_bicycle, hypergraph_product, repetition_ring, CssCode};
use crate::error::{Error, Result};

/// How to obtain the check matrices of a code. Relative paths are resolved
/// against the directory holding the manifest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CodeSource {
    Alist {
        hx: PathBuf,
        hz: PathBuf,
    },
    HypergraphProduct {
        h1: PathBuf,
        h2: PathBuf,
    },
    RepetitionRingProduct {
        ell1: usize,
        ell2: usize,
    },
    GeneralizedBicycle {
        a: Vec<usize>,
        b: Vec<usize>,
        ell: usize,
    },
    Benchmark {
        id: String,
    },
}

/// JSON description of a code: `{name, n, k, source}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeManifest {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub source: CodeSource,
}

impl CodeManifest {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    /// Builds the code and checks it against the recorded `n` and `k`.
    pub fn build(&self, base: &Path) -> Result<CssCode> {
        let read = |p: &PathBuf| -> Result<_> { from_alist(&fs::read_to_string(base.join(p))?) };
        let code = match &self.source {
            CodeSource::Alist { hx, hz } => CssCode::new(self.name.clone(), read(hx)?, read(hz)?)?,
            CodeSource::HypergraphProduct { h1, h2 } => hypergraph_product(&read(h1)?, &read(h2)?)?,
            CodeSource::RepetitionRingProduct { ell1, ell2 } => {
                hypergraph_product(&repetition_ring(*ell1)?, &repetition_ring(*ell2)?)?
            }
            CodeSource::GeneralizedBicycle { a, b, ell } => generalized_bicycle(a, b, *ell)?,
            CodeSource::Benchmark { id } => match id.to_ascii_lowercase().as_str() {
                "b1" => b1(),
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown benchmark code {other:?}"
                    )))
                }
            },
        };
        if code.n() != self.n || code.k() != self.k {
            return Err(Error::InvalidConfig(format!(
                "manifest declares [[{}, {}]] but the matrices give [[{}, {}]]",
                self.n,
                self.k,
                code.n(),
                code.k()
            )));
        }
        let mut code = code;
        code.name = self.name.clone();
        Ok(code)
    }

    /// Loads the manifest at `path` and builds its code.
    pub fn open(path: &Path) -> Result<(Self, CssCode)> {
        let manifest = Self::load(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let code = manifest.build(base)?;
        Ok((manifest, code))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::to_alist;

    #[test]
    fn alist_manifest_round_trip() {
        let dir = std::env::temp_dir().join(format!("qldpc-manifest-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let code =
            hypergraph_product(&repetition_ring(3).unwrap(), &repetition_ring(3).unwrap()).unwrap();
        fs::write(dir.join("hx.alist"), to_alist(code.hx())).unwrap();
        fs::write(dir.join("hz.alist"), to_alist(code.hz())).unwrap();
        let manifest = CodeManifest {
            name: "toric3".into(),
            n: 18,
            k: 2,
            source: CodeSource::Alist {
                hx: "hx.alist".into(),
                hz: "hz.alist".into(),
            },
        };
        manifest.save(&dir.join("code.json")).unwrap();
        let (loaded, rebuilt) = CodeManifest::open(&dir.join("code.json")).unwrap();
        assert_eq!(loaded, manifest);
        assert_eq!(rebuilt.hx(), code.hx());
        assert_eq!(rebuilt.name(), "toric3");
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn wrong_parameters_are_rejected() {
        let manifest = CodeManifest {
            name: "gb".into(),
            n: 6,
            k: 5,
            source: CodeSource::GeneralizedBicycle {
                a: vec![0],
                b: vec![0],
                ell: 3,
            },
        };
        assert!(manifest.build(Path::new(".")).is_err());
    }

    #[test]
    fn source_json_shape() {
        let s = serde_json::to_string(&CodeSource::Benchmark { id: "b1".into() }).unwrap();
        assert_eq!(s, r#"{"kind":"benchmark","id":"b1"}"#);
    }
}
