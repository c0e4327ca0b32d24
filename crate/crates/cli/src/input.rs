use std::fmt;
use std::path::{Path, PathBuf};

use planejump::arith::{BiPoly, Rational};
use planejump::branch::CharExponents;
use planejump::cluster::{build_diagram, BranchInput, Contacts, DiagramFile, EnriquesDiagram};
use planejump::puiseux::{parse, puiseux_branches, to_diagram, BranchResult};
use serde::{Deserialize, Serialize};

/// Failure classes, mapped to exit codes 1 and 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Invariant(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "error: {m}"),
            CliError::Invariant(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<planejump::Error> for CliError {
    fn from(e: planejump::Error) -> Self {
        match e {
            planejump::Error::Invariant(m) => CliError::Invariant(m),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Branch file: exponents and coefficients per branch, plus shared point
/// counts for the pairs that share more than the origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchFile {
    pub branches: Vec<BranchSpec>,
    #[serde(default)]
    pub contacts: Vec<ContactSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSpec {
    pub name: String,
    pub char_exponents: Vec<u64>,
    #[serde(default = "one")]
    pub multiplicity: u64,
}

fn one() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactSpec {
    pub pair: [BranchRef; 2],
    pub shared_points: usize,
}

/// A branch by name, or by position in the file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BranchRef {
    Name(String),
    Index(usize),
}

impl BranchFile {
    pub fn to_diagram(&self) -> Result<EnriquesDiagram, CliError> {
        let inputs = self
            .branches
            .iter()
            .map(|b| {
                Ok(BranchInput::new(
                    b.name.clone(),
                    CharExponents::new(b.char_exponents.clone())?,
                    b.multiplicity,
                ))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let index = |r: &BranchRef| match r {
            BranchRef::Index(i) if *i < self.branches.len() => Ok(*i),
            BranchRef::Index(i) => Err(CliError::Input(format!("no branch with index {i}"))),
            BranchRef::Name(n) => self
                .branches
                .iter()
                .position(|b| &b.name == n)
                .ok_or_else(|| CliError::Input(format!("no branch named {n:?}"))),
        };
        let mut contacts = Contacts::new();
        for c in &self.contacts {
            contacts.set(index(&c.pair[0])?, index(&c.pair[1])?, c.shared_points);
        }
        Ok(build_diagram(&inputs, &contacts)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Poly(String),
    Branches(PathBuf),
    Diagram(PathBuf),
}

/// A loaded curve: its diagram and, for polynomial input, the expansion.
pub struct Loaded {
    pub diagram: EnriquesDiagram,
    pub polynomial: Option<BiPoly<Rational>>,
    pub branches: Option<Vec<BranchResult>>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load(source: &Source, ext_depth: usize) -> Result<Loaded, CliError> {
    match source {
        Source::Poly(text) => {
            let f = parse(text)?;
            let branches = puiseux_branches(&f, ext_depth)?;
            Ok(Loaded {
                diagram: to_diagram(&branches)?,
                polynomial: Some(f),
                branches: Some(branches),
            })
        }
        Source::Branches(path) => Ok(Loaded {
            diagram: json::<BranchFile>(path)?.to_diagram()?,
            polynomial: None,
            branches: None,
        }),
        Source::Diagram(path) => Ok(Loaded {
            diagram: EnriquesDiagram::from_file(&json::<DiagramFile>(path)?)?,
            polynomial: None,
            branches: None,
        }),
    }
}
