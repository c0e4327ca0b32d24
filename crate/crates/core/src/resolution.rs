//! Numerical data of the minimal embedded resolution read off a diagram.
//!
//! Components are indexed with the exceptional divisors first (one per
//! diagram point, in diagram order) followed by one strict transform per
//! branch.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cluster::EnriquesDiagram;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionData {
    diagram: EnriquesDiagram,
    /// Coefficients of the total transform: `a_p` then the branch coefficients.
    a: Vec<i64>,
    k: Vec<i64>,
    intersection: Vec<Vec<i64>>,
    valence: Vec<usize>,
    labels: Vec<String>,
}

/// `a_p = m_p + Σ_{p → q} a_q`.
pub fn pullback_orders(d: &EnriquesDiagram) -> Vec<i64> {
    let mut a = Vec::with_capacity(d.len());
    for p in d.points() {
        let s: i64 = p.proximities().iter().map(|&q| a[q]).sum();
        a.push(p.multiplicity as i64 + s);
    }
    a
}

/// `k_p = 1 + Σ_{p → q} k_q`.
pub fn canonical_orders(d: &EnriquesDiagram) -> Vec<i64> {
    let mut k = Vec::with_capacity(d.len());
    for p in d.points() {
        let s: i64 = p.proximities().iter().map(|&q| k[q]).sum();
        k.push(1 + s);
    }
    k
}

/// Intersection matrix over all components of the total transform.
/// Diagonal entries of strict components are not defined locally and are
/// left at zero.
pub fn intersection_matrix(d: &EnriquesDiagram) -> Vec<Vec<i64>> {
    let n = d.len();
    let s = d.branches().len();
    let mut m = vec![vec![0i64; n + s]; n + s];
    let points = d.points();
    for (p, row) in m.iter_mut().enumerate().take(n) {
        row[p] = -1 - d.proximate_to(p).len() as i64;
    }
    for q in 0..n {
        for p in points[q].proximities() {
            let separated = points[q + 1..]
                .iter()
                .any(|r| r.proximities().contains(&p) && r.proximities().contains(&q));
            if !separated {
                m[p][q] = 1;
                m[q][p] = 1;
            }
        }
    }
    for (i, b) in d.branches().iter().enumerate() {
        if let Some(&t) = b.path.last() {
            m[n + i][t] = 1;
            m[t][n + i] = 1;
        }
    }
    m
}

impl ResolutionData {
    pub fn new(diagram: &EnriquesDiagram) -> Result<Self> {
        let v = diagram.validate();
        if !v.is_empty() {
            return Err(Error::InvalidDiagram(v));
        }
        let n = diagram.len();
        let mut a = pullback_orders(diagram);
        a.extend(diagram.branches().iter().map(|b| b.coefficient as i64));
        let k = canonical_orders(diagram);
        let intersection = intersection_matrix(diagram);
        let valence = (0..n)
            .map(|j| {
                (0..intersection.len())
                    .filter(|&c| c != j)
                    .map(|c| intersection[c][j] as usize)
                    .sum()
            })
            .collect();
        let mut labels: Vec<String> = (0..n).map(|p| format!("E{p}")).collect();
        labels.extend(diagram.branches().iter().map(|b| b.name.clone()));
        Ok(Self {
            diagram: diagram.clone(),
            a,
            k,
            intersection,
            valence,
            labels,
        })
    }

    pub fn diagram(&self) -> &EnriquesDiagram {
        &self.diagram
    }

    /// Number of exceptional divisors.
    pub fn num_exceptional(&self) -> usize {
        self.k.len()
    }

    pub fn num_strict(&self) -> usize {
        self.a.len() - self.k.len()
    }

    pub fn num_components(&self) -> usize {
        self.a.len()
    }

    /// Coefficients of `π*C` over all components.
    pub fn a(&self) -> &[i64] {
        &self.a
    }

    pub fn exceptional_a(&self) -> &[i64] {
        &self.a[..self.num_exceptional()]
    }

    pub fn strict_a(&self) -> &[i64] {
        &self.a[self.num_exceptional()..]
    }

    pub fn k(&self) -> &[i64] {
        &self.k
    }

    pub fn intersection(&self) -> &[Vec<i64>] {
        &self.intersection
    }

    pub fn self_intersection(&self, j: usize) -> i64 {
        self.intersection[j][j]
    }

    /// `E_j · E_j°`.
    pub fn valence(&self, j: usize) -> usize {
        self.valence[j]
    }

    pub fn valences(&self) -> &[usize] {
        &self.valence
    }

    pub fn label(&self, c: usize) -> &str {
        &self.labels[c]
    }

    pub fn check_exceptional(&self, j: usize) -> Result<()> {
        if j < self.num_exceptional() {
            Ok(())
        } else {
            Err(Error::NoSuchDivisor(j))
        }
    }

    /// `D · E_j` for a vector `D` over all components.
    pub fn dot(&self, d: &[i64], j: usize) -> i64 {
        d.iter().zip(&self.intersection).map(|(x, row)| x * row[j]).sum()
    }

    /// Pairs `(p, q)` of intersecting components.
    pub fn adjacencies(&self) -> Vec<(usize, usize)> {
        let c = self.num_components();
        let mut out = Vec::new();
        for p in 0..c {
            for q in p + 1..c {
                if self.intersection[p][q] != 0 {
                    out.push((p, q));
                }
            }
        }
        out
    }

    /// Maximal chains of divisors created from `E_j`: each starts at a child
    /// of `p_j` and continues through the blowup of its intersection with
    /// `E_j`.
    pub fn proximity_chains(&self, j: usize) -> Vec<Vec<usize>> {
        let d = &self.diagram;
        d.children(j)
            .into_iter()
            .map(|start| {
                let mut chain = vec![start];
                loop {
                    let last = *chain.last().unwrap();
                    let next = d
                        .children(last)
                        .into_iter()
                        .find(|&c| d.points()[c].extra_proximity == Some(j));
                    match next {
                        Some(c) => chain.push(c),
                        None => break chain,
                    }
                }
            })
            .collect()
    }

    /// Exact leading principal minors of the exceptional block.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        let n = self.num_exceptional();
        (1..=n)
            .map(|k| {
                let block: Vec<Vec<BigInt>> = (0..k)
                    .map(|i| (0..k).map(|j| BigInt::from(self.intersection[i][j])).collect())
                    .collect();
                bareiss_det(block)
            })
            .collect()
    }

    /// Negative definiteness: the `k`-th leading minor has sign `(-1)^k`.
    pub fn is_negative_definite(&self) -> bool {
        self.leading_minors().iter().enumerate().all(|(i, m)| {
            if i % 2 == 0 {
                m.is_negative()
            } else {
                m.is_positive()
            }
        })
    }

    /// Dual graph of the reduced total transform in DOT format.
    pub fn to_dot(&self) -> String {
        let n = self.num_exceptional();
        let mut s = String::from("graph resolution {\n");
        for j in 0..n {
            let _ = writeln!(
                s,
                "  E{j} [label=\"E{j} [a={},k={},self={}]\"];",
                self.a[j], self.k[j], self.intersection[j][j]
            );
        }
        for i in n..self.num_components() {
            let _ = writeln!(
                s,
                "  C{} [shape=box,label=\"{} [a={}]\"];",
                i - n,
                escape(&self.labels[i]),
                self.a[i]
            );
        }
        let node = |c: usize| if c < n { format!("E{c}") } else { format!("C{}", c - n) };
        for (p, q) in self.adjacencies() {
            let _ = writeln!(s, "  {} -- {};", node(p), node(q));
        }
        s.push_str("}\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Fraction-free Gaussian elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    m[n - 1][n - 1].clone() * sign
}
