//! Enriques diagrams: the tree of infinitely near points blown up by the
//! minimal embedded resolution, with proximities and multiplicities.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::branch::{multiplicity_sequence, CharExponents, MultiplicitySeq, Proximity, SeqEntry};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Point {
    pub id: usize,
    pub parent: Option<usize>,
    /// Second proximity target of a satellite point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_proximity: Option<usize>,
    /// Total multiplicity of the curve (with coefficients).
    pub multiplicity: u64,
}

impl Point {
    /// Points this one is proximate to.
    pub fn proximities(&self) -> Vec<usize> {
        self.parent.into_iter().chain(self.extra_proximity).collect()
    }

    pub fn is_satellite(&self) -> bool {
        self.extra_proximity.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramBranch {
    pub name: String,
    pub exponents: CharExponents,
    pub coefficient: u64,
    pub path: Vec<usize>,
}

/// One input branch for [`build_diagram`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchInput {
    pub name: String,
    pub exponents: CharExponents,
    pub coefficient: u64,
}

impl BranchInput {
    pub fn new(name: impl Into<String>, exponents: CharExponents, coefficient: u64) -> Self {
        Self {
            name: name.into(),
            exponents,
            coefficient,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    TreeShape(String),
    ProximityCardinality { point: usize, reason: String },
    ProximityInequality { point: usize, multiplicity: u64, proximate_sum: u64 },
    MultiplicityMismatch { point: usize, stored: u64, derived: u64 },
    Minimality { point: usize, reason: String },
    BranchPath { branch: String, reason: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TreeShape(r) => write!(f, "tree shape: {r}"),
            Violation::ProximityCardinality { point, reason } => {
                write!(f, "proximity cardinality at p{point}: {reason}")
            }
            Violation::ProximityInequality {
                point,
                multiplicity,
                proximate_sum,
            } => write!(
                f,
                "proximity inequality at p{point}: multiplicity {multiplicity} < {proximate_sum} summed over proximate points"
            ),
            Violation::MultiplicityMismatch {
                point,
                stored,
                derived,
            } => write!(
                f,
                "multiplicity at p{point} is {stored} but the branches through it give {derived}"
            ),
            Violation::Minimality { point, reason } => write!(f, "minimality at p{point}: {reason}"),
            Violation::BranchPath { branch, reason } => write!(f, "branch {branch}: {reason}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnriquesDiagram {
    points: Vec<Point>,
    branches: Vec<DiagramBranch>,
}

impl EnriquesDiagram {
    /// Assembles a diagram without checking it; see [`EnriquesDiagram::validate`].
    pub fn from_parts(points: Vec<Point>, branches: Vec<DiagramBranch>) -> Self {
        Self { points, branches }
    }

    /// Assembles and validates.
    pub fn new(points: Vec<Point>, branches: Vec<DiagramBranch>) -> Result<Self> {
        let d = Self::from_parts(points, branches);
        let v = d.validate();
        if v.is_empty() {
            Ok(d)
        } else {
            Err(Error::InvalidDiagram(v))
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn branches(&self) -> &[DiagramBranch] {
        &self.branches
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn multiplicities(&self) -> Vec<u64> {
        self.points.iter().map(|p| p.multiplicity).collect()
    }

    /// Points proximate to `p`.
    pub fn proximate_to(&self, p: usize) -> Vec<usize> {
        self.points
            .iter()
            .filter(|q| q.parent == Some(p) || q.extra_proximity == Some(p))
            .map(|q| q.id)
            .collect()
    }

    pub fn children(&self, p: usize) -> Vec<usize> {
        self.points
            .iter()
            .filter(|q| q.parent == Some(p))
            .map(|q| q.id)
            .collect()
    }

    /// Multiplicities of branch `b` along its path, from the proximity
    /// equalities read backwards from the last point.
    pub fn branch_multiplicities(&self, b: usize) -> Vec<u64> {
        let path = &self.branches[b].path;
        let mut m = vec![0u64; path.len()];
        for i in (0..path.len()).rev() {
            if i + 1 == path.len() {
                m[i] = 1;
                continue;
            }
            m[i] = (i + 1..path.len())
                .filter(|&j| {
                    let q = &self.points[path[j]];
                    q.parent == Some(path[i]) || q.extra_proximity == Some(path[i])
                })
                .map(|j| m[j])
                .sum();
        }
        m
    }

    /// Multiplicity sequence of branch `b` read off the diagram.
    pub fn branch_sequence(&self, b: usize) -> Option<MultiplicitySeq> {
        let path = &self.branches[b].path;
        let m = self.branch_multiplicities(b);
        let entries = path
            .iter()
            .zip(&m)
            .map(|(&p, &mult)| {
                let kind = match self.points[p].extra_proximity {
                    None => Proximity::Free,
                    Some(t) => Proximity::Satellite(path.iter().position(|&x| x == t)?),
                };
                Some(SeqEntry {
                    multiplicity: mult,
                    kind,
                })
            })
            .collect::<Option<Vec<_>>>()?;
        MultiplicitySeq::from_entries(entries).ok()
    }

    /// Checks the diagram and returns every violation found.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.check_tree();
        if !out.is_empty() {
            return out;
        }
        self.check_proximities(&mut out);
        self.check_branches(&mut out);
        if !out.is_empty() {
            return out;
        }
        self.check_multiplicities(&mut out);
        self.check_minimality(&mut out);
        out
    }

    fn check_tree(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.points.len();
        for (i, p) in self.points.iter().enumerate() {
            if p.id != i {
                out.push(Violation::TreeShape(format!("point at position {i} has id {}", p.id)));
            }
            match p.parent {
                None if i != 0 => out.push(Violation::TreeShape(format!("p{i} has no parent"))),
                Some(q) if q >= i => out.push(Violation::TreeShape(format!(
                    "parent p{q} of p{i} does not precede it"
                ))),
                _ => {}
            }
            if let Some(t) = p.extra_proximity {
                if t >= n {
                    out.push(Violation::TreeShape(format!("p{i} is proximate to missing p{t}")));
                }
            }
        }
        for b in &self.branches {
            let bad = |r: String| Violation::BranchPath {
                branch: b.name.clone(),
                reason: r,
            };
            if b.coefficient == 0 {
                out.push(bad("coefficient must be positive".into()));
            }
            if b.path.iter().any(|&p| p >= n) {
                out.push(bad("path names a missing point".into()));
                continue;
            }
            if let Some(&first) = b.path.first() {
                if first != 0 {
                    out.push(bad("path does not start at the root".into()));
                }
            } else if n > 0 {
                out.push(bad("empty path in a nonempty diagram".into()));
            }
            for w in b.path.windows(2) {
                if self.points[w[1]].parent != Some(w[0]) {
                    out.push(bad(format!("p{} is not a child of p{}", w[1], w[0])));
                }
            }
        }
        out
    }

    fn ancestors(&self, p: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.points[p].parent;
        while let Some(q) = cur {
            out.push(q);
            cur = self.points[q].parent;
        }
        out
    }

    fn check_proximities(&self, out: &mut Vec<Violation>) {
        for p in &self.points {
            let Some(t) = p.extra_proximity else { continue };
            let bad = |r: &str| Violation::ProximityCardinality {
                point: p.id,
                reason: r.into(),
            };
            let Some(parent) = p.parent else {
                out.push(bad("the root cannot be a satellite"));
                continue;
            };
            if t == parent {
                out.push(bad("extra proximity repeats the parent"));
            } else if !self.ancestors(p.id).contains(&t) {
                out.push(bad("extra proximity target is not an ancestor"));
            } else if !self.points[parent].proximities().contains(&t) {
                out.push(bad("the parent does not lie on the extra target's divisor"));
            } else if self
                .children(parent)
                .into_iter()
                .any(|c| c < p.id && self.points[c].extra_proximity == Some(t))
            {
                out.push(bad("two points at the same intersection of divisors"));
            }
        }
    }

    fn check_branches(&self, out: &mut Vec<Violation>) {
        for (b, br) in self.branches.iter().enumerate() {
            if br.path.is_empty() {
                if !br.exponents.is_smooth() {
                    out.push(Violation::BranchPath {
                        branch: br.name.clone(),
                        reason: "singular branch with an empty path".into(),
                    });
                }
                continue;
            }
            let derived = self.branch_sequence(b).and_then(|s| s.to_char_exponents().ok());
            match derived {
                None => out.push(Violation::BranchPath {
                    branch: br.name.clone(),
                    reason: "path is not the resolution of a branch".into(),
                }),
                Some(c) if c != br.exponents => out.push(Violation::BranchPath {
                    branch: br.name.clone(),
                    reason: format!("path resolves {c}, not {}", br.exponents),
                }),
                Some(_) => {}
            }
        }
    }

    /// Totals from the branches: `Σ coefficient × branch multiplicity`, and
    /// the number of branches through each point weighted by multiplicity
    /// but not by coefficient.
    fn branch_totals(&self) -> (Vec<u64>, Vec<u64>) {
        let n = self.points.len();
        let (mut total, mut reduced) = (vec![0u64; n], vec![0u64; n]);
        for (b, br) in self.branches.iter().enumerate() {
            for (&p, m) in br.path.iter().zip(self.branch_multiplicities(b)) {
                total[p] += br.coefficient * m;
                reduced[p] += m;
            }
        }
        (total, reduced)
    }

    fn check_multiplicities(&self, out: &mut Vec<Violation>) {
        let (total, _) = self.branch_totals();
        for p in &self.points {
            let prox_sum: u64 = self
                .proximate_to(p.id)
                .iter()
                .map(|&q| self.points[q].multiplicity)
                .sum();
            if p.multiplicity < prox_sum {
                out.push(Violation::ProximityInequality {
                    point: p.id,
                    multiplicity: p.multiplicity,
                    proximate_sum: prox_sum,
                });
            }
            if p.multiplicity != total[p.id] {
                out.push(Violation::MultiplicityMismatch {
                    point: p.id,
                    stored: p.multiplicity,
                    derived: total[p.id],
                });
            }
        }
    }

    /// A point is blown up only if the total transform is not simple normal
    /// crossing there: the reduced curve is singular at it, it lies on two
    /// exceptional divisors, or the curve is tangent to its divisor (a child
    /// is proximate to the grandparent).
    fn check_minimality(&self, out: &mut Vec<Violation>) {
        let (_, reduced) = self.branch_totals();
        for p in &self.points {
            if reduced[p.id] == 0 {
                out.push(Violation::Minimality {
                    point: p.id,
                    reason: "the point is on no branch".into(),
                });
                continue;
            }
            let tangent = p.parent.is_some_and(|q| {
                self.children(p.id)
                    .iter()
                    .any(|&c| self.points[c].extra_proximity == Some(q))
            });
            if reduced[p.id] < 2 && !p.is_satellite() && !tangent {
                out.push(Violation::Minimality {
                    point: p.id,
                    reason: "the total transform is already simple normal crossing here".into(),
                });
            }
        }
    }

    pub fn to_file(&self) -> DiagramFile {
        DiagramFile {
            points: self
                .points
                .iter()
                .map(|p| FilePoint {
                    id: p.id,
                    parent: p.parent,
                    extra_proximity: p.extra_proximity,
                    multiplicity: Some(p.multiplicity),
                })
                .collect(),
            branches: self
                .branches
                .iter()
                .map(|b| FileBranch {
                    name: b.name.clone(),
                    char_exponents: Some(b.exponents.beta().to_vec()),
                    multiplicity: b.coefficient,
                    path: b.path.clone(),
                })
                .collect(),
        }
    }

    /// Reads the serialized form. Missing point multiplicities are derived
    /// from the branches and missing exponents from the paths.
    pub fn from_file(f: &DiagramFile) -> Result<Self> {
        let mut points: Vec<Point> = f
            .points
            .iter()
            .map(|p| Point {
                id: p.id,
                parent: p.parent,
                extra_proximity: p.extra_proximity,
                multiplicity: p.multiplicity.unwrap_or(0),
            })
            .collect();
        let mut branches: Vec<DiagramBranch> = f
            .branches
            .iter()
            .map(|b| DiagramBranch {
                name: b.name.clone(),
                exponents: CharExponents::smooth(),
                coefficient: b.multiplicity,
                path: b.path.clone(),
            })
            .collect();
        let shell = Self::from_parts(points.clone(), branches.clone());
        let v = shell.check_tree();
        if !v.is_empty() {
            return Err(Error::InvalidDiagram(v));
        }
        for (i, fb) in f.branches.iter().enumerate() {
            branches[i].exponents = match &fb.char_exponents {
                Some(beta) => CharExponents::new(beta.clone())?,
                None if fb.path.is_empty() => CharExponents::smooth(),
                None => shell
                    .branch_sequence(i)
                    .and_then(|s| s.to_char_exponents().ok())
                    .ok_or_else(|| {
                        Error::InvalidDiagram(vec![Violation::BranchPath {
                            branch: fb.name.clone(),
                            reason: "path is not the resolution of a branch".into(),
                        }])
                    })?,
            };
        }
        let (total, _) = shell.branch_totals();
        for (p, fp) in points.iter_mut().zip(&f.points) {
            if fp.multiplicity.is_none() {
                p.multiplicity = total[p.id];
            }
        }
        Self::new(points, branches)
    }
}

/// Serialized diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramFile {
    pub points: Vec<FilePoint>,
    pub branches: Vec<FileBranch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilePoint {
    pub id: usize,
    pub parent: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_proximity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileBranch {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub char_exponents: Option<Vec<u64>>,
    /// Coefficient of the branch in the curve.
    pub multiplicity: u64,
    pub path: Vec<usize>,
}

/// Symmetric table of shared point counts; pairs not listed share one point.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Contacts {
    entries: Vec<((usize, usize), usize)>,
}

impl Contacts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, a: usize, b: usize, shared: usize) -> Self {
        self.entries.push(((a.min(b), a.max(b)), shared));
        self
    }

    pub fn set(&mut self, a: usize, b: usize, shared: usize) {
        self.entries.push(((a.min(b), a.max(b)), shared));
    }

    fn matrix(&self, n: usize, names: &[&str]) -> Result<Vec<Vec<usize>>> {
        let mut m = vec![vec![1usize; n]; n];
        let mut seen = vec![vec![None; n]; n];
        for &((a, b), s) in &self.entries {
            if a == b || b >= n {
                return Err(Error::InconsistentContacts(format!(
                    "contact between branches {a} and {b} is not a pair of distinct branches"
                )));
            }
            if s == 0 {
                return Err(Error::SharedOutOfRange {
                    shared: 0,
                    max: usize::MAX,
                });
            }
            if let Some(prev) = seen[a][b] {
                if prev != s {
                    return Err(Error::InconsistentContacts(format!(
                        "{} and {} given both {prev} and {s} shared points",
                        names[a], names[b]
                    )));
                }
            }
            seen[a][b] = Some(s);
            m[a][b] = s;
            m[b][a] = s;
        }
        Ok(m)
    }
}

/// Builds the diagram of the minimal embedded resolution of a curve with
/// the given branches and pairwise shared point counts.
pub fn build_diagram(branches: &[BranchInput], contacts: &Contacts) -> Result<EnriquesDiagram> {
    let n = branches.len();
    let names: Vec<&str> = branches.iter().map(|b| b.name.as_str()).collect();
    let c = contacts.matrix(n, &names)?;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut v = [c[i][j], c[i][k], c[j][k]];
                v.sort_unstable();
                if v[0] != v[1] {
                    return Err(Error::InconsistentContacts(format!(
                        "{}, {}, {} share {}, {}, {} points; the two smallest must agree",
                        names[i], names[j], names[k], c[i][j], c[i][k], c[j][k]
                    )));
                }
            }
        }
    }
    let seqs: Vec<MultiplicitySeq> = branches.iter().map(|b| multiplicity_sequence(&b.exponents)).collect();
    let len: Vec<usize> = (0..n)
        .map(|i| {
            let own = if branches[i].exponents.is_smooth() { 0 } else { seqs[i].len() };
            (0..n).filter(|&j| j != i).map(|j| c[i][j]).fold(own, usize::max)
        })
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            let err = |reason: String| Error::IncompatibleContact {
                first: names[i].into(),
                second: names[j].into(),
                shared: c[i][j],
                reason,
            };
            if let Some(m) = seqs[i].compatible_prefix(&seqs[j]) {
                if c[i][j] > m {
                    return Err(err(format!("their proximity structures differ at point {m}")));
                }
            }
            let k = c[i][j];
            if k < len[i] && k < len[j] {
                if let (Proximity::Satellite(a), Proximity::Satellite(b)) =
                    (seqs[i].entry(k).kind, seqs[j].entry(k).kind)
                {
                    if a == b {
                        return Err(err(
                            "both continue through the same satellite point, so they share more".into(),
                        ));
                    }
                }
            }
        }
    }
    // representative of the node of branch i at depth d
    let rep = |i: usize, d: usize| (0..=i).find(|&j| j == i || d < c[i][j]).unwrap();
    let mut keys: Vec<(usize, usize)> = Vec::new();
    for (i, &l) in len.iter().enumerate().take(n) {
        for d in 0..l {
            if rep(i, d) == i {
                keys.push((d, i));
            }
        }
    }
    keys.sort_unstable();
    let index = |i: usize, d: usize| keys.binary_search(&(d, rep(i, d))).unwrap();
    let mut points: Vec<Point> = keys
        .iter()
        .enumerate()
        .map(|(id, &(d, i))| Point {
            id,
            parent: d.checked_sub(1).map(|e| index(i, e)),
            extra_proximity: match seqs[i].entry(d).kind {
                Proximity::Free => None,
                Proximity::Satellite(t) => Some(index(i, t)),
            },
            multiplicity: 0,
        })
        .collect();
    let mut out_branches = Vec::new();
    for (i, b) in branches.iter().enumerate() {
        let path: Vec<usize> = (0..len[i]).map(|d| index(i, d)).collect();
        for (d, &p) in path.iter().enumerate() {
            points[p].multiplicity += b.coefficient * seqs[i].entry(d).multiplicity;
        }
        out_branches.push(DiagramBranch {
            name: b.name.clone(),
            exponents: b.exponents.clone(),
            coefficient: b.coefficient,
            path,
        });
    }
    EnriquesDiagram::new(points, out_branches)
}
