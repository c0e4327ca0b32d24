//! Combinatorics of a single analytic branch.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Characteristic exponents `(β0; β1, ..., βg)` with `β0` the multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct CharExponents {
    beta: Vec<u64>,
}

impl CharExponents {
    pub fn new(beta: Vec<u64>) -> Result<Self> {
        let bad = |reason: &str| Error::MalformedExponents {
            exponents: beta.clone(),
            reason: reason.into(),
        };
        let Some(&b0) = beta.first() else {
            return Err(bad("empty"));
        };
        if b0 == 0 {
            return Err(bad("multiplicity must be positive"));
        }
        if beta.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("exponents must be strictly increasing"));
        }
        let mut e = b0;
        for &b in &beta[1..] {
            let next = e.gcd(&b);
            if next == e {
                return Err(bad("gcds must strictly decrease"));
            }
            e = next;
        }
        if e != 1 {
            return Err(bad("gcd of all exponents must be 1"));
        }
        Ok(Self { beta })
    }

    /// The smooth branch `(1;)`.
    pub fn smooth() -> Self {
        Self { beta: vec![1] }
    }

    pub fn beta(&self) -> &[u64] {
        &self.beta
    }

    pub fn multiplicity(&self) -> u64 {
        self.beta[0]
    }

    /// Number of characteristic pairs.
    pub fn genus(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn is_smooth(&self) -> bool {
        self.beta[0] == 1
    }

    /// `e_q = gcd(β0, ..., βq)` for `q = 0..=g`.
    pub fn gcds(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.beta.len());
        let mut e = 0u64;
        for &b in &self.beta {
            e = e.gcd(&b);
            out.push(e);
        }
        out
    }
}

impl TryFrom<Vec<u64>> for CharExponents {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<CharExponents> for Vec<u64> {
    fn from(c: CharExponents) -> Self {
        c.beta
    }
}

impl fmt::Display for CharExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rest: Vec<String> = self.beta[1..].iter().map(|b| b.to_string()).collect();
        write!(f, "({};{})", self.beta[0], rest.join(","))
    }
}

/// Whether an infinitely near point lies on one exceptional divisor or two.
/// A satellite records the index of its second proximity target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Proximity {
    Free,
    Satellite(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeqEntry {
    pub multiplicity: u64,
    pub kind: Proximity,
}

/// Multiplicities of a branch at its successive infinitely near points.
/// Indices in `Proximity::Satellite` refer to positions in the sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicitySeq {
    entries: Vec<SeqEntry>,
}

impl MultiplicitySeq {
    pub fn from_entries(entries: Vec<SeqEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::MalformedSequence("empty".into()));
        }
        for (i, e) in entries.iter().enumerate() {
            if e.multiplicity == 0 {
                return Err(Error::MalformedSequence(format!("zero multiplicity at {i}")));
            }
            if let Proximity::Satellite(t) = e.kind {
                if i < 2 || t + 1 >= i {
                    return Err(Error::MalformedSequence(format!(
                        "satellite target {t} of point {i} is not a proper ancestor of its parent"
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[SeqEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicities(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.multiplicity).collect()
    }

    /// Entry `i`, continuing past the end with free points of multiplicity
    /// one (the smooth strict transform keeps meeting new free points).
    pub fn entry(&self, i: usize) -> SeqEntry {
        self.entries.get(i).copied().unwrap_or(SeqEntry {
            multiplicity: 1,
            kind: Proximity::Free,
        })
    }

    /// Points proximate to `i`: its successor plus satellites targeting it.
    pub fn proximate_to(&self, i: usize) -> Vec<usize> {
        (i + 1..self.entries.len())
            .filter(|&j| j == i + 1 || self.entries[j].kind == Proximity::Satellite(i))
            .collect()
    }

    /// Longest prefix two branches can share: the first position at which
    /// the proximity kinds differ. `None` if they never differ.
    pub fn compatible_prefix(&self, other: &Self) -> Option<usize> {
        let n = self.len().max(other.len());
        (0..n).find(|&i| self.entry(i).kind != other.entry(i).kind)
    }

    /// Number of free-to-satellite transitions; equals the number of
    /// characteristic pairs.
    pub fn satellite_runs(&self) -> usize {
        self.entries
            .windows(2)
            .filter(|w| w[0].kind == Proximity::Free && w[1].kind != Proximity::Free)
            .count()
    }

    /// Recovers the characteristic exponents. Trailing free points of
    /// multiplicity one are accepted as tail.
    pub fn to_char_exponents(&self) -> Result<CharExponents> {
        let m = self.multiplicities();
        let n = m.len();
        let free = |i: usize| self.entries[i].kind == Proximity::Free;
        let bad = |msg: &str| Error::MalformedSequence(msg.to_string());
        let mut beta = vec![m[0]];
        let mut e_prev = m[0];
        let mut i = 0;
        while e_prev > 1 {
            let start = i;
            while i < n && free(i) {
                i += 1;
            }
            if i == start || i == n {
                return Err(bad("sequence ends before the branch is smooth"));
            }
            let run = &m[start..i];
            let (&r1, head) = run.split_last().unwrap();
            if head.iter().any(|&x| x != e_prev) || r1 >= e_prev {
                return Err(bad("free run does not follow the Euclidean pattern"));
            }
            let diff = head.len() as u64 * e_prev + r1;
            while i < n && !free(i) {
                i += 1;
            }
            let last = *beta.last().unwrap();
            beta.push(if beta.len() == 1 { diff } else { last + diff });
            e_prev = m[i - 1];
        }
        let c = CharExponents::new(beta)?;
        let regen = multiplicity_sequence(&c);
        let k = regen.len();
        let tail_ok = (k..n).all(|j| m[j] == 1 && free(j));
        if (c.is_smooth() && (0..n).all(|j| m[j] == 1 && free(j)))
            || (!c.is_smooth() && n >= k && regen.entries == self.entries[..k] && tail_ok)
        {
            Ok(c)
        } else {
            Err(bad("sequence is not the multiplicity sequence of a branch"))
        }
    }
}

impl fmt::Display for MultiplicitySeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| match e.kind {
                Proximity::Free => format!("{} free", e.multiplicity),
                Proximity::Satellite(t) => {
                    format!("{} satellite->{{p{},p{}}}", e.multiplicity, t, i - 1)
                }
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Multiplicity sequence of the minimal embedded resolution of the branch,
/// by the Euclidean algorithm on consecutive characteristic pairs.
pub fn multiplicity_sequence(c: &CharExponents) -> MultiplicitySeq {
    let beta = c.beta();
    if c.is_smooth() {
        return MultiplicitySeq {
            entries: vec![SeqEntry {
                multiplicity: 1,
                kind: Proximity::Free,
            }],
        };
    }
    let e = c.gcds();
    let mut entries: Vec<SeqEntry> = Vec::new();
    for q in 1..beta.len() {
        let (mut a, mut b) = if q == 1 {
            (beta[1], beta[0])
        } else {
            (beta[q] - beta[q - 1], e[q - 1])
        };
        let before = entries.len().checked_sub(1);
        // last index of each Euclidean block so far
        let mut lasts: Vec<Option<usize>> = Vec::new();
        let mut k = 0;
        loop {
            let (h, r) = (a / b, a % b);
            for t in 0..h as usize {
                let kind = match k {
                    0 => Proximity::Free,
                    1 if t == 0 => Proximity::Free,
                    1 => Proximity::Satellite(lasts[0].or(before).expect("pair has a prior point")),
                    _ if t == 0 => Proximity::Satellite(lasts[k - 2].or(before).expect("prior point")),
                    _ => Proximity::Satellite(lasts[k - 1].expect("nonempty block")),
                };
                entries.push(SeqEntry {
                    multiplicity: b,
                    kind,
                });
            }
            lasts.push(if h > 0 { Some(entries.len() - 1) } else { None });
            if r == 0 {
                break;
            }
            a = b;
            b = r;
            k += 1;
        }
    }
    MultiplicitySeq { entries }
}

/// Minimal generators of the semigroup of a branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semigroup {
    generators: Vec<u64>,
}

impl Semigroup {
    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Membership by dynamic programming over `0..=n`.
    pub fn contains(&self, n: u64) -> bool {
        generated_by(&self.generators, n)
    }

    /// Largest gap plus one (0 for the full semigroup).
    pub fn conductor(&self) -> u64 {
        let mut c = 0;
        let mut n = 0;
        let mut run = 0;
        let m = self.generators[0];
        while run < m {
            if self.contains(n) {
                run += 1;
            } else {
                run = 0;
                c = n + 1;
            }
            n += 1;
        }
        c
    }
}

impl fmt::Display for Semigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.generators.iter().map(|x| x.to_string()).collect();
        write!(f, "<{}>", g.join(","))
    }
}

pub(crate) fn generated_by(gens: &[u64], n: u64) -> bool {
    let n = n as usize;
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for v in 1..=n {
        reach[v] = gens.iter().any(|&g| g as usize <= v && reach[v - g as usize]);
    }
    reach[n]
}

pub fn semigroup(c: &CharExponents) -> Semigroup {
    let beta = c.beta();
    let e = c.gcds();
    let mut gens = vec![beta[0]];
    if beta.len() > 1 {
        gens.push(beta[1]);
    }
    for q in 1..beta.len().saturating_sub(1) {
        let n_q = e[q - 1] / e[q];
        let next = n_q * gens[q] + beta[q + 1] - beta[q];
        gens.push(next);
    }
    Semigroup { generators: gens }
}

/// Intersection multiplicity of two distinct branches sharing `shared`
/// infinitely near points (Noether's formula).
pub fn branch_intersection(a: &CharExponents, b: &CharExponents, shared: usize) -> Result<u64> {
    let sa = multiplicity_sequence(a);
    let sb = multiplicity_sequence(b);
    let max = sa.compatible_prefix(&sb);
    if shared == 0 || max.is_some_and(|m| shared > m) {
        return Err(Error::SharedOutOfRange {
            shared,
            max: max.unwrap_or(usize::MAX),
        });
    }
    Ok((0..shared)
        .map(|i| sa.entry(i).multiplicity * sb.entry(i).multiplicity)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat_int, Rational, UniPoly};
    use proptest::prelude::*;

    fn ce(v: &[u64]) -> CharExponents {
        CharExponents::new(v.to_vec()).unwrap()
    }

    fn shape(s: &MultiplicitySeq) -> Vec<(u64, Option<usize>)> {
        s.entries()
            .iter()
            .map(|e| {
                let t = match e.kind {
                    Proximity::Free => None,
                    Proximity::Satellite(t) => Some(t),
                };
                (e.multiplicity, t)
            })
            .collect()
    }

    #[test]
    fn sequences_of_small_branches() {
        let s = multiplicity_sequence(&ce(&[3, 4]));
        assert_eq!(shape(&s), vec![(3, None), (1, None), (1, Some(0)), (1, Some(0))]);
        assert_eq!(s.to_string(), "[3 free, 1 free, 1 satellite->{p0,p1}, 1 satellite->{p0,p2}]");
        let s = multiplicity_sequence(&ce(&[2, 3]));
        assert_eq!(shape(&s), vec![(2, None), (1, None), (1, Some(0))]);
        assert_eq!(shape(&multiplicity_sequence(&CharExponents::smooth())), vec![(1, None)]);
        let s = multiplicity_sequence(&ce(&[5, 7]));
        assert_eq!(
            shape(&s),
            vec![(5, None), (2, None), (2, Some(0)), (1, Some(0)), (1, Some(2))]
        );
        let s = multiplicity_sequence(&ce(&[4, 6, 7]));
        assert_eq!(
            shape(&s),
            vec![(4, None), (2, None), (2, Some(0)), (1, None), (1, Some(2))]
        );
    }

    #[test]
    fn malformed_exponents_rejected() {
        for v in [vec![], vec![0], vec![2, 4], vec![4, 6], vec![3, 2], vec![2, 3, 5]] {
            assert!(CharExponents::new(v).is_err());
        }
    }

    /// Attained orders `ord_t(x^i y^j ...)` of polynomials in a
    /// parametrization, by echelon reduction of truncated series.
    fn semigroup_oracle(x: &UniPoly<Rational>, y: &UniPoly<Rational>, prec: usize) -> Vec<u64> {
        let trunc = |p: &UniPoly<Rational>| -> Vec<Rational> {
            (0..prec).map(|i| p.coeff(i)).collect()
        };
        let mut rows: std::collections::BTreeMap<usize, Vec<Rational>> = Default::default();
        let mut xi = UniPoly::one();
        while xi.order().unwrap_or(prec) < prec {
            let mut m = xi.clone();
            while m.order().unwrap_or(prec) < prec {
                let mut v = trunc(&m);
                while let Some(p) = v.iter().position(|c| *c != rat_int(0)) {
                    let Some(r) = rows.get(&p) else {
                        rows.insert(p, v);
                        break;
                    };
                    let c = v[p].clone() / r[p].clone();
                    for k in 0..prec {
                        v[k] = v[k].clone() - c.clone() * r[k].clone();
                    }
                }
                m = UniPoly::new(trunc(&m.mul(y)));
            }
            xi = UniPoly::new(trunc(&xi.mul(x)));
        }
        rows.keys().map(|&p| p as u64).collect()
    }

    fn minimal_generators(values: &[u64], limit: u64) -> Vec<u64> {
        let mut gens: Vec<u64> = Vec::new();
        for &v in values.iter().filter(|&&v| v > 0 && v < limit) {
            if !generated_by(&gens, v) {
                gens.push(v);
            }
        }
        gens
    }

    #[test]
    fn semigroup_matches_parametrization() {
        let t = |n: usize| UniPoly::<Rational>::monomial(rat_int(1), n);
        assert_eq!(semigroup(&ce(&[3, 4])).generators(), &[3, 4]);
        let vals = semigroup_oracle(&t(3), &t(4), 30);
        assert_eq!(minimal_generators(&vals, 30), vec![3, 4]);

        assert_eq!(semigroup(&ce(&[4, 6, 7])).generators(), &[4, 6, 13]);
        let vals = semigroup_oracle(&t(4), &t(6).add(&t(7)), 40);
        assert_eq!(minimal_generators(&vals, 40), vec![4, 6, 13]);

        assert_eq!(semigroup(&CharExponents::smooth()).generators(), &[1]);
        assert_eq!(semigroup(&ce(&[3, 4])).conductor(), 6);
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(branch_intersection(&ce(&[2, 3]), &ce(&[2, 3]), 1).unwrap(), 4);
        // oracle: x^3 - y^2 along x = s^2... of the transposed cusp x = s^3, y = s^2
        let f = |s: &UniPoly<Rational>, t: &UniPoly<Rational>| s.pow(3).sub(&t.pow(2));
        let s = |n| UniPoly::<Rational>::monomial(rat_int(1), n);
        assert_eq!(f(&s(2), &s(3)).order(), None);
        assert_eq!(f(&s(3), &s(2)).order(), Some(4));
        let sm = CharExponents::smooth();
        assert_eq!(branch_intersection(&sm, &sm, 1).unwrap(), 1);
        assert_eq!(branch_intersection(&sm, &sm, 2).unwrap(), 2);
        assert!(matches!(
            branch_intersection(&sm, &sm, 0),
            Err(Error::SharedOutOfRange { .. })
        ));
        // a smooth branch cannot pass through the cusp's satellite point
        assert!(matches!(
            branch_intersection(&ce(&[2, 3]), &sm, 3),
            Err(Error::SharedOutOfRange { shared: 3, max: 2 })
        ));
    }

    pub(crate) fn arb_exponents() -> impl Strategy<Value = CharExponents> {
        (1u64..=12, proptest::collection::vec(1u64..30, 0..4)).prop_filter_map(
            "not a branch",
            |(b0, steps)| {
                let mut beta = vec![b0];
                let mut e = b0;
                for s in steps {
                    if e == 1 {
                        break;
                    }
                    let next = beta.last().unwrap() + s;
                    if next.gcd(&e) < e {
                        e = next.gcd(&e);
                        beta.push(next);
                    }
                }
                CharExponents::new(beta).ok()
            },
        )
    }

    proptest! {
        #[test]
        fn sequence_properties(c in arb_exponents()) {
            let s = multiplicity_sequence(&c);
            let m = s.multiplicities();
            prop_assert_eq!(m[0], c.multiplicity());
            prop_assert_eq!(*m.last().unwrap(), 1);
            let n = m.len();
            for p in 0..n {
                let sum: u64 = s.proximate_to(p).iter().map(|&q| m[q]).sum();
                if p + 1 < n {
                    prop_assert_eq!(m[p], sum);
                } else {
                    prop_assert!(m[p] >= sum);
                }
            }
            prop_assert_eq!(s.satellite_runs(), c.genus());
            prop_assert_eq!(s.to_char_exponents().unwrap(), c.clone());
        }

        #[test]
        fn semigroup_generators_are_minimal(c in arb_exponents()) {
            let g = semigroup(&c);
            let gens = g.generators();
            prop_assert_eq!(gens[0], c.multiplicity());
            for i in 0..gens.len() {
                let others: Vec<u64> = gens.iter().enumerate()
                    .filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                prop_assert!(!generated_by(&others, gens[i]));
            }
        }

        #[test]
        fn intersection_is_symmetric(a in arb_exponents(), b in arb_exponents(), k in 1usize..8) {
            prop_assert_eq!(branch_intersection(&a, &b, k), branch_intersection(&b, &a, k));
        }
    }
}
