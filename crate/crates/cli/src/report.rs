//! Reports shared by the text and json renderings. Everything a text report
//! shows comes from these structures, so json output re-renders to the same
//! text.

use std::fmt::Write;

use planejump::arith::{fmt_rational, Rational};
use planejump::jumping::{JumpReport, Relevance};
use planejump::puiseux::BranchResult;
use planejump::resolution::ResolutionData;
use serde::{Deserialize, Serialize};

fn labels(r: &ResolutionData, cs: &[usize]) -> Vec<String> {
    cs.iter().map(|&c| r.label(c).to_string()).collect()
}

fn rats(v: &[Rational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

fn set(v: &[String]) -> String {
    format!("{{{}}}", v.join(", "))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorRow {
    pub label: String,
    pub multiplicity: u64,
    pub a: i64,
    pub k: i64,
    pub self_intersection: i64,
    pub valence: usize,
    pub proximate_to: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchRow {
    pub name: String,
    pub char_exponents: Vec<u64>,
    pub coefficient: u64,
    pub path: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugates: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolveReport {
    pub divisors: Vec<DivisorRow>,
    pub branches: Vec<BranchRow>,
}

impl ResolveReport {
    pub fn new(r: &ResolutionData, expansion: Option<&[BranchResult]>) -> Self {
        let d = r.diagram();
        let divisors = (0..r.num_exceptional())
            .map(|j| DivisorRow {
                label: r.label(j).to_string(),
                multiplicity: d.points()[j].multiplicity,
                a: r.a()[j],
                k: r.k()[j],
                self_intersection: r.self_intersection(j),
                valence: r.valence(j),
                proximate_to: labels(r, &d.points()[j].proximities()),
            })
            .collect();
        let branches = d
            .branches()
            .iter()
            .enumerate()
            .map(|(i, b)| BranchRow {
                name: b.name.clone(),
                char_exponents: b.exponents.beta().to_vec(),
                coefficient: b.coefficient,
                path: labels(r, &b.path),
                conjugates: expansion.map(|e| e[i].conjugates),
            })
            .collect();
        Self { divisors, branches }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{:<6} {:>5} {:>6} {:>6} {:>5} {:>7}  proximate to", "", "mult", "a", "k", "E^2", "valence").unwrap();
        for d in &self.divisors {
            writeln!(
                s,
                "{:<6} {:>5} {:>6} {:>6} {:>5} {:>7}  {}",
                d.label,
                d.multiplicity,
                d.a,
                d.k,
                d.self_intersection,
                d.valence,
                d.proximate_to.join(" ")
            )
            .unwrap();
        }
        if self.divisors.is_empty() {
            writeln!(s, "(no exceptional divisors: the curve is smooth)").unwrap();
        }
        for b in &self.branches {
            let beta: Vec<String> = b.char_exponents.iter().map(|x| x.to_string()).collect();
            let beta = match beta.split_first() {
                Some((b0, rest)) => format!("({b0};{})", rest.join(",")),
                None => "()".into(),
            };
            write!(s, "branch {} {} coefficient {} through {}", b.name, beta, b.coefficient, set(&b.path)).unwrap();
            if let Some(c) = b.conjugates.filter(|&c| c > 1) {
                write!(s, ", one of {c} conjugates").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelevanceRow {
    pub divisor: String,
    pub a: i64,
    pub valence: usize,
    pub relevant: bool,
    pub witness: Option<String>,
    pub contributed: Vec<String>,
}

fn relevance_rows(r: &ResolutionData, rel: &[Relevance]) -> Vec<RelevanceRow> {
    rel.iter()
        .map(|x| RelevanceRow {
            divisor: r.label(x.divisor).to_string(),
            a: r.a()[x.divisor],
            valence: x.valence,
            relevant: x.relevant,
            witness: x.witness.as_ref().map(fmt_rational),
            contributed: rats(&x.contributed),
        })
        .collect()
}

fn render_relevance(s: &mut String, rows: &[RelevanceRow]) {
    writeln!(s, "{:<6} {:>6} {:>7} {:>9}  contributes in (0,1]", "", "a", "valence", "witness").unwrap();
    for row in rows {
        writeln!(
            s,
            "{:<6} {:>6} {:>7} {:>9}  {}",
            row.divisor,
            row.a,
            row.valence,
            row.witness.as_deref().unwrap_or("-"),
            set(&row.contributed)
        )
        .unwrap();
    }
    let rel: Vec<String> = rows.iter().filter(|r| r.relevant).map(|r| r.divisor.clone()).collect();
    writeln!(s, "relevant: {}", set(&rel)).unwrap();
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpRow {
    pub lambda: String,
    pub critical: Vec<String>,
    pub contributing: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpOutput {
    pub bound: String,
    pub lct: Option<String>,
    pub jumping_numbers: Vec<JumpRow>,
    pub relevance: Vec<RelevanceRow>,
}

impl JumpOutput {
    pub fn new(r: &ResolutionData, report: &JumpReport) -> Self {
        Self {
            bound: fmt_rational(&report.bound),
            lct: report.lct.as_ref().map(fmt_rational),
            jumping_numbers: report
                .records
                .iter()
                .map(|x| JumpRow {
                    lambda: fmt_rational(&x.lambda),
                    critical: labels(r, &x.critical),
                    contributing: labels(r, &x.contributing),
                })
                .collect(),
            relevance: relevance_rows(r, &report.relevance),
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "jumping numbers in (0, {}]", self.bound).unwrap();
        let critical: Vec<String> = self.jumping_numbers.iter().map(|row| set(&row.critical)).collect();
        let w = critical.iter().map(|c| c.chars().count()).max().unwrap_or(0).max(8);
        writeln!(s, "{:>9}  {:<w$}  contributed by", "lambda", "critical").unwrap();
        for (row, c) in self.jumping_numbers.iter().zip(&critical) {
            let by = if row.contributing.is_empty() {
                "no single divisor".to_string()
            } else {
                row.contributing.join(" ")
            };
            writeln!(s, "{:>9}  {:<w$}  {}", row.lambda, c, by).unwrap();
        }
        writeln!(s, "lct: {}", self.lct.as_deref().unwrap_or("-")).unwrap();
        render_relevance(&mut s, &self.relevance);
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelevanceOutput {
    pub divisors: Vec<RelevanceRow>,
    pub lct: Option<JumpRow>,
}

impl RelevanceOutput {
    pub fn new(r: &ResolutionData, report: &JumpReport) -> Self {
        let lct = report.records.first().map(|x| JumpRow {
            lambda: fmt_rational(&x.lambda),
            critical: labels(r, &x.critical),
            contributing: labels(r, &x.contributing),
        });
        Self {
            divisors: relevance_rows(r, &report.relevance),
            lct,
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        render_relevance(&mut s, &self.divisors);
        match &self.lct {
            None => writeln!(s, "lct: -").unwrap(),
            Some(l) if l.contributing.is_empty() => writeln!(
                s,
                "lct {}: no single contributor; critical set {}",
                l.lambda,
                set(&l.critical)
            )
            .unwrap(),
            Some(l) => writeln!(s, "lct {}: contributed by {}", l.lambda, set(&l.contributing)).unwrap(),
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOutput {
    pub polynomial: String,
    pub bound: String,
    pub jumping_numbers: Vec<String>,
}

impl OracleOutput {
    pub fn render(&self) -> String {
        format!(
            "{}: Newton polygon jumping numbers in (0, {}] below 1: {}\n",
            self.polynomial,
            self.bound,
            set(&self.jumping_numbers)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutput {
    pub seed: u64,
    pub diagrams: usize,
    pub divisors: usize,
    pub relevant: usize,
    pub violations: Vec<String>,
}

impl CheckOutput {
    pub fn render(&self) -> String {
        let mut s = format!(
            "seed {}: {} diagrams, {} divisors, {} of valence >= 3, {} violations\n",
            self.seed,
            self.diagrams,
            self.divisors,
            self.relevant,
            self.violations.len()
        );
        for v in &self.violations {
            writeln!(s, "  {v}").unwrap();
        }
        s
    }
}
