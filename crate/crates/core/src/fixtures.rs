//! Reference values shipped with the crate: printed Wigner matrices, the
//! negativity table, generator pairs and structure counts.
//!
//! Matrix entries are expression strings. A printed matrix may use shorthand
//! symbols (such as `+'`); its `legend` maps each symbol to an expression and
//! its `variables` bind names such as `a` or `w` used inside entries.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cyclo::{parse_with, CycloError, Cyclotomic, Env};
use crate::gates::{close_group, GateError, GateGroup, Notation, Permutation, DEFAULT_ORDER_CAP};
use crate::spectra::{Ray, SpectraError};
use crate::wigner::WignerMatrix;

const RAW: &str = include_str!("../data/fixtures.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fixtures {
    pub qubit_table: Vec<QubitEntry>,
    pub negativity_table: Vec<NegativityEntry>,
    pub printed_matrices: Vec<PrintedMatrix>,
    pub groups: Vec<GroupFixture>,
    pub structure_counts: BTreeMap<String, serde_json::Value>,
}

/// A single-qubit reference state and its printed Wigner matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QubitEntry {
    pub key: String,
    /// name understood by [`crate::spectra::reference_state`]
    pub state: String,
    pub scale: String,
    pub rows: Vec<Vec<String>>,
    /// false when the state is not cyclotomic and only a numeric check applies
    pub exact: bool,
}

/// The state is either a reference-state name or a list of amplitude strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Named(String),
    Amplitudes(Vec<String>),
}

impl StateSpec {
    pub fn label(&self) -> String {
        match self {
            StateSpec::Named(n) => format!("|{n}⟩"),
            StateSpec::Amplitudes(a) => format!("({})", a.join(",")),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NegativityEntry {
    pub dim: usize,
    pub state: StateSpec,
    /// expression, or `positive` for a Wigner function without negative entries
    pub sum_negative: String,
    #[serde(default)]
    pub group: Option<String>,
    #[serde(default)]
    pub variables: BTreeMap<String, String>,
}

/// Expected sum of negative entries.
#[derive(Debug, Clone, PartialEq)]
pub enum ExpectedNegativity {
    Exact(Cyclotomic),
    /// no negative entries at all
    Positive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrintedMatrix {
    pub key: String,
    pub dim: usize,
    pub state: Vec<String>,
    pub scale: String,
    pub rows: Vec<Vec<String>>,
    #[serde(default)]
    pub legend: BTreeMap<String, String>,
    #[serde(default)]
    pub variables: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFixture {
    pub name: String,
    pub dim: usize,
    pub order: usize,
    pub notation: Notation,
    pub generators: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("fixture {key}: {source}")]
    Cyclo { key: String, source: CycloError },
    #[error("fixture {key}: {source}")]
    Spectra { key: String, source: SpectraError },
    #[error("fixture {key}: {source}")]
    Gate { key: String, source: GateError },
    #[error("no fixture named {0}")]
    Missing(String),
}

/// The parsed fixture file.
pub fn fixtures() -> &'static Fixtures {
    static CELL: OnceLock<Fixtures> = OnceLock::new();
    CELL.get_or_init(|| serde_json::from_str(RAW).expect("bundled fixtures are valid JSON"))
}

fn env_of(vars: &BTreeMap<String, String>, key: &str) -> Result<Env, FixtureError> {
    let mut env = Env::new();
    for (name, expr) in vars {
        let v = parse_with(expr, &Env::new()).map_err(|source| FixtureError::Cyclo { key: key.into(), source })?;
        env.insert(name, v);
    }
    Ok(env)
}

fn decode_rows(
    key: &str,
    scale: &str,
    rows: &[Vec<String>],
    legend: &BTreeMap<String, String>,
    env: &Env,
) -> Result<WignerMatrix, FixtureError> {
    let err = |source| FixtureError::Cyclo { key: key.into(), source };
    let s = parse_with(scale, env).map_err(err)?;
    let rows = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|tok| {
                    let expr = legend.get(tok.as_str()).map_or(tok.as_str(), String::as_str);
                    parse_with(expr, env).map(|v| v * &s).map_err(err)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WignerMatrix::from_rows(rows))
}

impl QubitEntry {
    pub fn expected(&self) -> Result<WignerMatrix, FixtureError> {
        decode_rows(&self.key, &self.scale, &self.rows, &BTreeMap::new(), &Env::new())
    }
}

impl PrintedMatrix {
    pub fn env(&self) -> Result<Env, FixtureError> {
        env_of(&self.variables, &self.key)
    }

    pub fn ray(&self) -> Result<Ray, FixtureError> {
        Ray::parse_list(&self.state, &self.env()?).map_err(|source| FixtureError::Spectra {
            key: self.key.clone(),
            source,
        })
    }

    /// The printed matrix with every symbol decoded and the scale applied.
    pub fn expected(&self) -> Result<WignerMatrix, FixtureError> {
        decode_rows(&self.key, &self.scale, &self.rows, &self.legend, &self.env()?)
    }
}

impl NegativityEntry {
    pub fn label(&self) -> String {
        self.state.label()
    }

    pub fn expected(&self) -> Result<ExpectedNegativity, FixtureError> {
        if self.sum_negative == "positive" {
            return Ok(ExpectedNegativity::Positive);
        }
        let env = env_of(&self.variables, &self.label())?;
        parse_with(&self.sum_negative, &env)
            .map(ExpectedNegativity::Exact)
            .map_err(|source| FixtureError::Cyclo { key: self.label(), source })
    }

    /// The state as a ray, or `None` for a named state.
    pub fn ray(&self) -> Result<Option<Ray>, FixtureError> {
        match &self.state {
            StateSpec::Named(_) => Ok(None),
            StateSpec::Amplitudes(a) => {
                let env = env_of(&self.variables, &self.label())?;
                Ray::parse_list(a, &env)
                    .map(Some)
                    .map_err(|source| FixtureError::Spectra { key: self.label(), source })
            }
        }
    }
}

impl GroupFixture {
    pub fn permutations(&self) -> Result<Vec<Permutation>, FixtureError> {
        self.generators
            .iter()
            .map(|g| Permutation::parse(g, self.notation, Some(self.dim)))
            .collect::<Result<_, _>>()
            .map_err(|source| FixtureError::Gate { key: self.name.clone(), source })
    }

    pub fn group(&self) -> Result<GateGroup, FixtureError> {
        close_group(&self.permutations()?, DEFAULT_ORDER_CAP).map_err(|source| FixtureError::Gate {
            key: self.name.clone(),
            source,
        })
    }
}

/// A group fixture by name, e.g. `"A4"`.
pub fn group_fixture(name: &str) -> Result<&'static GroupFixture, FixtureError> {
    fixtures()
        .groups
        .iter()
        .find(|g| g.name == name)
        .ok_or_else(|| FixtureError::Missing(name.to_string()))
}

pub fn printed_matrix(key: &str) -> Result<&'static PrintedMatrix, FixtureError> {
    fixtures()
        .printed_matrices
        .iter()
        .find(|m| m.key == key)
        .ok_or_else(|| FixtureError::Missing(key.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn everything_decodes() {
        let f = fixtures();
        for q in &f.qubit_table {
            assert!(q.expected().unwrap().total().is_one() || !q.exact, "{}", q.key);
        }
        for m in &f.printed_matrices {
            let w = m.expected().unwrap();
            assert_eq!(w.dim(), m.dim, "{}", m.key);
            assert_eq!(m.ray().unwrap().dim(), m.dim);
        }
        for t in &f.negativity_table {
            t.expected().unwrap();
            t.ray().unwrap();
        }
        for g in &f.groups {
            assert_eq!(g.group().unwrap().order(), g.order, "{}", g.name);
        }
    }

    #[test]
    fn legend_symbols_resolve() {
        let m = printed_matrix("five_dit_all_ones").unwrap();
        let w = m.expected().unwrap();
        let golden = parse_with("(1+sqrt(5))/40", &Env::new()).unwrap();
        assert_eq!(*w.get(1, 1), golden);
    }
}
