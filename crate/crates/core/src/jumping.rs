//! Jumping numbers, the contribution criterion and relevant divisors.
//!
//! Multiplier ideals are compared through their antinef closures: a
//! multiplier ideal is `{f : ord_{E_i} f >= D_i, C_j^{S_j} | f}`, and two such
//! complete ideals agree exactly when the strict parts `S` agree and the
//! minimal vectors `D' >= D` with `(D' + S)·E_i <= 0` agree.

use std::collections::BTreeSet;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::arith::{ceil_div, floor_left_scale, floor_scale, fmt_rational, rat_int, Rational};
use crate::error::{Error, Result};
use crate::resolution::ResolutionData;

/// Integer coefficients over the exceptional divisors and the strict
/// transforms of a fixed resolution.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorVector {
    pub exceptional: Vec<i64>,
    pub strict: Vec<i64>,
}

impl DivisorVector {
    pub fn zero(r: &ResolutionData) -> Self {
        Self {
            exceptional: vec![0; r.num_exceptional()],
            strict: vec![0; r.num_strict()],
        }
    }

    /// Coefficients over all components, exceptional first.
    pub fn full(&self) -> Vec<i64> {
        self.exceptional.iter().chain(&self.strict).copied().collect()
    }

    /// Componentwise `self <= other` on the exceptional part.
    pub fn le_exceptional(&self, other: &Self) -> bool {
        self.exceptional.iter().zip(&other.exceptional).all(|(a, b)| a <= b)
    }
}

/// Rounding used for the multiplier vector at `λ` or just below it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    At,
    LeftLimit,
}

fn round(lambda: &Rational, a: i64, side: Side) -> i64 {
    match side {
        Side::At => floor_scale(lambda, a),
        Side::LeftLimit => floor_left_scale(lambda, a),
    }
}

fn check_bound(bound: &Rational) -> Result<()> {
    if bound.is_positive() {
        Ok(())
    } else {
        Err(Error::BadBound("(0, ∞)".into()))
    }
}

/// Candidate jumping numbers `(k_j + n)/a_j`, `n >= 1`, up to `bound`.
pub fn candidates(r: &ResolutionData, j: usize, bound: &Rational) -> Result<Vec<Rational>> {
    r.check_exceptional(j)?;
    check_bound(bound)?;
    let (a, k) = (r.a()[j], r.k()[j]);
    let top = floor_scale(bound, a);
    Ok((k + 1..=top).map(|t| Rational::new(t.into(), a.into())).collect())
}

pub fn is_candidate(r: &ResolutionData, j: usize, lambda: &Rational) -> bool {
    let t = lambda * rat_int(r.a()[j]);
    t.is_integer() && t.to_integer() > (r.k()[j]).into()
}

/// `⌊λ π*C⌋` over all components.
pub fn floor_total_transform(r: &ResolutionData, lambda: &Rational) -> Vec<i64> {
    r.a().iter().map(|&a| floor_scale(lambda, a)).collect()
}

/// `-⌊λ π*C⌋ · E_j`.
pub fn criterion_value(r: &ResolutionData, j: usize, lambda: &Rational) -> i64 {
    -r.dot(&floor_total_transform(r, lambda), j)
}

/// Whether `E_j` contributes the candidate `λ`: `-⌊λ π*C⌋ · E_j >= 2`.
pub fn contributes(r: &ResolutionData, j: usize, lambda: &Rational) -> Result<bool> {
    r.check_exceptional(j)?;
    if !is_candidate(r, j, lambda) {
        return Err(Error::NotCandidate {
            divisor: j,
            lambda: fmt_rational(lambda),
        });
    }
    Ok(criterion_value(r, j, lambda) >= 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relevance {
    pub divisor: usize,
    pub valence: usize,
    pub relevant: bool,
    /// `1 - 1/a_j` for relevant divisors.
    #[serde(with = "opt_rational")]
    pub witness: Option<Rational>,
    /// Candidates in `(0, 1]` passing the criterion.
    #[serde(with = "rational_vec")]
    pub contributed: Vec<Rational>,
}

/// Relevance of `E_j` by valence, with the witness `1 - 1/a_j`.
pub fn relevant(r: &ResolutionData, j: usize) -> Result<Relevance> {
    r.check_exceptional(j)?;
    let valence = r.valence(j);
    let is_rel = valence >= 3;
    let witness = is_rel.then(|| Rational::one() - Rational::new(1.into(), r.a()[j].into()));
    let contributed = candidates(r, j, &Rational::one())?
        .into_iter()
        .filter(|l| criterion_value(r, j, l) >= 2)
        .collect();
    Ok(Relevance {
        divisor: j,
        valence,
        relevant: is_rel,
        witness,
        contributed,
    })
}

/// Checks the relevance theorem on every exceptional divisor: valence at
/// least 3 exactly when some candidate in `(0, 1]` passes the criterion, and
/// then `1 - 1/a_j` passes.
pub fn verify_relevance(r: &ResolutionData) -> Result<()> {
    for j in 0..r.num_exceptional() {
        let rel = relevant(r, j)?;
        if rel.relevant == rel.contributed.is_empty() {
            return Err(Error::Invariant(format!(
                "E{j} has valence {} but contributes {} candidates in (0,1]",
                rel.valence,
                rel.contributed.len()
            )));
        }
        if let Some(w) = &rel.witness {
            if !contributes(r, j, w).unwrap_or(false) {
                return Err(Error::Invariant(format!(
                    "E{j} is relevant but does not contribute {}",
                    fmt_rational(w)
                )));
            }
        }
    }
    Ok(())
}

/// Vector of the multiplier ideal at `λ` (or just below it): exceptional
/// coefficients `max(0, F(λ a_i) - k_i)` and strict coefficients `F(λ m_j)`.
pub fn multiplier_vector(r: &ResolutionData, lambda: &Rational, side: Side) -> DivisorVector {
    let n = r.num_exceptional();
    DivisorVector {
        exceptional: (0..n)
            .map(|i| (round(lambda, r.a()[i], side) - r.k()[i]).max(0))
            .collect(),
        strict: r.strict_a().iter().map(|&m| round(lambda, m, side)).collect(),
    }
}

/// Minimal vector above `d` (exceptional part) with `D·E_j <= 0` for every
/// exceptional `E_j`, the strict part held fixed; unloading always picks the
/// first offending divisor.
pub fn antinef_closure(r: &ResolutionData, d: &DivisorVector) -> DivisorVector {
    antinef_closure_by(r, d, |offending| offending[0])
}

/// Unloading with a caller-chosen pick among the offending divisors.
pub fn antinef_closure_by(
    r: &ResolutionData,
    d: &DivisorVector,
    mut pick: impl FnMut(&[usize]) -> usize,
) -> DivisorVector {
    let n = r.num_exceptional();
    let mut full = d.full();
    loop {
        let offending: Vec<usize> = (0..n).filter(|&j| r.dot(&full, j) > 0).collect();
        if offending.is_empty() {
            break;
        }
        let j = pick(&offending);
        debug_assert!(offending.contains(&j));
        let excess = r.dot(&full, j);
        full[j] += ceil_div(excess, -r.self_intersection(j));
    }
    DivisorVector {
        exceptional: full[..n].to_vec(),
        strict: d.strict.clone(),
    }
}

pub fn is_antinef(r: &ResolutionData, d: &DivisorVector) -> bool {
    let full = d.full();
    (0..r.num_exceptional()).all(|j| r.dot(&full, j) <= 0)
}

/// Whether the multiplier ideal drops at `λ`.
pub fn is_jumping(r: &ResolutionData, lambda: &Rational) -> bool {
    let at = antinef_closure(r, &multiplier_vector(r, lambda, Side::At));
    let left = antinef_closure(r, &multiplier_vector(r, lambda, Side::LeftLimit));
    at != left
}

/// The grid `t / a_c` in `(0, bound]` over every component; jumping numbers
/// lie on it.
pub fn candidate_grid(r: &ResolutionData, bound: &Rational) -> Result<Vec<Rational>> {
    check_bound(bound)?;
    let mut grid = BTreeSet::new();
    for &a in r.a() {
        for t in 1..=floor_scale(bound, a) {
            grid.insert(Rational::new(t.into(), a.into()));
        }
    }
    Ok(grid.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpRecord {
    #[serde(with = "rational_str")]
    pub lambda: Rational,
    /// Components `c` (exceptional or strict) with `λ a_c` integral.
    pub critical: Vec<usize>,
    /// Exceptional divisors contributing `λ` individually.
    pub contributing: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpReport {
    #[serde(with = "rational_str")]
    pub bound: Rational,
    pub records: Vec<JumpRecord>,
    #[serde(with = "opt_rational")]
    pub lct: Option<Rational>,
    pub relevance: Vec<Relevance>,
}

impl JumpReport {
    pub fn jumping_numbers(&self) -> Vec<Rational> {
        self.records.iter().map(|r| r.lambda.clone()).collect()
    }

    pub fn contains(&self, lambda: &Rational) -> bool {
        self.records.iter().any(|r| &r.lambda == lambda)
    }
}

fn record(r: &ResolutionData, lambda: &Rational) -> JumpRecord {
    let critical: Vec<usize> = (0..r.num_components())
        .filter(|&c| (lambda * rat_int(r.a()[c])).is_integer())
        .collect();
    let contributing = critical
        .iter()
        .copied()
        .filter(|&j| j < r.num_exceptional())
        .filter(|&j| is_candidate(r, j, lambda) && criterion_value(r, j, lambda) >= 2)
        .collect();
    JumpRecord {
        lambda: lambda.clone(),
        critical,
        contributing,
    }
}

/// All jumping numbers in `(0, bound]` with their critical and contributing
/// divisors, the log canonical threshold and the relevance table.
pub fn jumping_numbers(r: &ResolutionData, bound: &Rational) -> Result<JumpReport> {
    let records: Vec<JumpRecord> = candidate_grid(r, bound)?
        .iter()
        .filter(|l| is_jumping(r, l))
        .map(|l| record(r, l))
        .collect();
    let relevance = (0..r.num_exceptional())
        .map(|j| relevant(r, j))
        .collect::<Result<Vec<_>>>()?;
    Ok(JumpReport {
        bound: bound.clone(),
        lct: records.first().map(|x| x.lambda.clone()),
        records,
        relevance,
    })
}

/// Critical and contributing divisors of a jumping number.
pub fn contribution_report(r: &ResolutionData, lambda: &Rational) -> Result<JumpRecord> {
    if !lambda.is_positive() || !is_jumping(r, lambda) {
        return Err(Error::NotJumping(fmt_rational(lambda)));
    }
    Ok(record(r, lambda))
}

/// Periodicity above 1: `λ > 1` jumps iff `λ` is an integer or `λ - 1`
/// jumps. Needs a report computed up to at least 1.
pub fn skoda_shift(report: &JumpReport, lambda: &Rational) -> Result<bool> {
    if lambda <= &Rational::one() {
        return Err(Error::BadBound("(1, ∞)".into()));
    }
    if report.bound < Rational::one() {
        return Err(Error::BadBound("a report computed up to 1".into()));
    }
    if lambda.is_integer() {
        return Ok(true);
    }
    let frac = lambda - lambda.floor();
    Ok(report.contains(&frac))
}

mod rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        crate::arith::parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s}")))
    }
}

mod opt_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        r.as_ref().map(fmt_rational).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| {
                crate::arith::parse_rational(&s)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s}")))
            })
            .transpose()
    }
}

mod rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(fmt_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .into_iter()
            .map(|s| {
                crate::arith::parse_rational(&s)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s}")))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::branch::CharExponents;
    use crate::cluster::{build_diagram, BranchInput, Contacts};

    fn res(branches: &[(&[u64], u64)], contacts: Contacts) -> ResolutionData {
        let b: Vec<BranchInput> = branches
            .iter()
            .enumerate()
            .map(|(i, (c, m))| BranchInput::new(format!("C{i}"), CharExponents::new(c.to_vec()).unwrap(), *m))
            .collect();
        ResolutionData::new(&build_diagram(&b, &contacts).unwrap()).unwrap()
    }

    fn cusp() -> ResolutionData {
        res(&[(&[3, 4], 1)], Contacts::new())
    }

    fn two_cusps() -> ResolutionData {
        res(&[(&[2, 3], 1), (&[2, 3], 1)], Contacts::new())
    }

    fn node() -> ResolutionData {
        res(&[(&[1], 1), (&[1], 1)], Contacts::new())
    }

    /// `{i/p + j/q : i, j >= 1} ∩ (0, 1)` plus 1, the known set for `x^p - y^q`.
    fn quasi_homogeneous(p: i64, q: i64) -> Vec<Rational> {
        let mut s = BTreeSet::new();
        for i in 1..=p {
            for j in 1..=q {
                let l = rat(i, p) + rat(j, q);
                if l < Rational::one() {
                    s.insert(l);
                }
            }
        }
        s.insert(Rational::one());
        s.into_iter().collect()
    }

    #[test]
    fn candidate_examples() {
        let r = cusp();
        assert_eq!(candidates(&r, 0, &rat(1, 1)).unwrap(), vec![rat(2, 3), rat(1, 1)]);
        let e3: Vec<Rational> = (7..=12).map(|t| rat(t, 12)).collect();
        assert_eq!(candidates(&r, 3, &rat(1, 1)).unwrap(), e3);
        assert!(candidates(&r, 4, &rat(1, 1)).is_err());
        assert!(candidates(&r, 0, &rat(0, 1)).is_err());
    }

    #[test]
    fn criterion_examples() {
        let r = cusp();
        assert_eq!(floor_total_transform(&r, &rat(11, 12)), vec![2, 3, 7, 11, 0]);
        assert_eq!(criterion_value(&r, 3, &rat(11, 12)), 2);
        assert!(contributes(&r, 3, &rat(11, 12)).unwrap());
        assert!(!contributes(&r, 2, &rat(5, 8)).unwrap());
        assert!(matches!(contributes(&r, 3, &rat(5, 8)), Err(Error::NotCandidate { .. })));
        assert!(!contributes(&two_cusps(), 0, &rat(1, 2)).unwrap());
    }

    #[test]
    fn relevance_examples() {
        let r = cusp();
        let rel: Vec<bool> = (0..4).map(|j| relevant(&r, j).unwrap().relevant).collect();
        assert_eq!(rel, vec![false, false, false, true]);
        assert_eq!(relevant(&r, 3).unwrap().witness, Some(rat(11, 12)));
        let r = two_cusps();
        for j in [3, 4] {
            let x = relevant(&r, j).unwrap();
            assert!(x.relevant);
            assert_eq!(x.witness, Some(rat(9, 10)));
        }
        assert!(!relevant(&node(), 0).unwrap().relevant);
        for r in [cusp(), two_cusps(), node()] {
            verify_relevance(&r).unwrap();
        }
    }

    fn dv(e: &[i64], s: &[i64]) -> DivisorVector {
        DivisorVector {
            exceptional: e.to_vec(),
            strict: s.to_vec(),
        }
    }

    /// Minimal relatively antinef vector above `d`, searching all vectors
    /// with coefficients up to `cap`.
    fn exhaustive_closure(r: &ResolutionData, d: &DivisorVector, cap: i64) -> Option<DivisorVector> {
        let n = d.exceptional.len();
        let mut best: Option<DivisorVector> = None;
        let mut cur = d.exceptional.clone();
        if cur.iter().any(|&c| c > cap) {
            return None;
        }
        loop {
            let v = dv(&cur, &d.strict);
            if is_antinef(r, &v) {
                best = Some(match best {
                    None => v,
                    Some(b) => dv(
                        &b.exceptional.iter().zip(&cur).map(|(x, y)| *x.min(y)).collect::<Vec<_>>(),
                        &d.strict,
                    ),
                });
            }
            let mut i = 0;
            loop {
                if i == n {
                    return best;
                }
                if cur[i] < cap {
                    cur[i] += 1;
                    break;
                }
                cur[i] = d.exceptional[i];
                i += 1;
            }
        }
    }

    #[test]
    fn closure_examples() {
        let r = cusp();
        let d = dv(&[0, 0, 0, 1], &[0]);
        assert_eq!(antinef_closure(&r, &d), dv(&[1, 1, 2, 3], &[0]));
        assert_eq!(exhaustive_closure(&r, &d, 4), Some(dv(&[1, 1, 2, 3], &[0])));
        let pull = dv(&[3, 4, 8, 12], &[0]);
        assert_eq!(antinef_closure(&r, &pull), pull);
        let z = DivisorVector::zero(&r);
        assert_eq!(antinef_closure(&r, &z), z);
    }

    #[test]
    fn multiplier_vector_examples() {
        let r = cusp();
        assert_eq!(multiplier_vector(&r, &rat(7, 12), Side::At), dv(&[0, 0, 0, 1], &[0]));
        assert_eq!(multiplier_vector(&r, &rat(7, 12), Side::LeftLimit), dv(&[0, 0, 0, 0], &[0]));
        assert_eq!(multiplier_vector(&r, &rat(1, 2), Side::At), DivisorVector::zero(&r));
    }

    #[test]
    fn jumping_number_examples() {
        let one = Rational::one();
        let rep = jumping_numbers(&cusp(), &one).unwrap();
        assert_eq!(rep.jumping_numbers(), quasi_homogeneous(4, 3));
        assert_eq!(rep.lct, Some(rat(7, 12)));
        assert!(!rep.contains(&rat(5, 8)) && !rep.contains(&rat(7, 8)));

        let rep = jumping_numbers(&two_cusps(), &one).unwrap();
        assert_eq!(rep.jumping_numbers(), vec![rat(1, 2), rat(7, 10), rat(9, 10), one.clone()]);
        assert_eq!(rep.lct, Some(rat(1, 2)));
        assert_eq!(rep.records[0].critical, vec![0, 3, 4]);
        assert!(rep.records[0].contributing.is_empty());

        assert_eq!(jumping_numbers(&node(), &one).unwrap().jumping_numbers(), vec![one]);
    }

    #[test]
    fn contribution_report_examples() {
        let r = cusp();
        let rec = contribution_report(&r, &rat(11, 12)).unwrap();
        assert_eq!((rec.critical, rec.contributing), (vec![3], vec![3]));
        let rec = contribution_report(&r, &Rational::one()).unwrap();
        assert_eq!(rec.critical, vec![0, 1, 2, 3, 4]);
        assert!(matches!(contribution_report(&r, &rat(5, 8)), Err(Error::NotJumping(_))));
    }

    #[test]
    fn skoda_examples() {
        let r = cusp();
        let rep = jumping_numbers(&r, &Rational::one()).unwrap();
        assert!(skoda_shift(&rep, &rat(19, 12)).unwrap());
        assert!(skoda_shift(&rep, &rat(2, 1)).unwrap());
        assert!(!skoda_shift(&rep, &rat(13, 8)).unwrap());
        for l in [rat(19, 12), rat(2, 1), rat(13, 8), rat(17, 12)] {
            assert_eq!(is_jumping(&r, &l), skoda_shift(&rep, &l).unwrap());
        }
    }

    #[test]
    fn smooth_curves_jump_at_integers_and_fractions_of_coefficient() {
        let r = res(&[(&[1], 1)], Contacts::new());
        assert_eq!(r.num_exceptional(), 0);
        let rep = jumping_numbers(&r, &rat(3, 1)).unwrap();
        assert_eq!(rep.jumping_numbers(), vec![rat(1, 1), rat(2, 1), rat(3, 1)]);
        let r = res(&[(&[1], 2)], Contacts::new());
        let rep = jumping_numbers(&r, &Rational::one()).unwrap();
        assert_eq!(rep.jumping_numbers(), vec![rat(1, 2), rat(1, 1)]);
    }
}
