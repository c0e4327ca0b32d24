//! Random branch data and diagrams for property checks.

use num_integer::Integer;
use rand::Rng;

use crate::branch::{multiplicity_sequence, CharExponents};
use crate::cluster::{build_diagram, BranchInput, Contacts, EnriquesDiagram};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusConfig {
    pub max_branches: usize,
    pub max_beta0: u64,
    /// Coefficients are drawn from `1..=max_coefficient`.
    pub max_coefficient: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            max_branches: 3,
            max_beta0: 12,
            max_coefficient: 1,
        }
    }
}

/// Characteristic exponents with multiplicity at most `max_beta0`; each new
/// exponent lies within `β₀ + 1` of the previous one.
pub fn random_exponents<R: Rng + ?Sized>(rng: &mut R, max_beta0: u64) -> CharExponents {
    let b0 = rng.gen_range(1..=max_beta0.max(1));
    let mut beta = vec![b0];
    let (mut e, mut prev) = (b0, b0);
    while e > 1 {
        let choices: Vec<u64> = (prev + 1..=prev + b0 + 1).filter(|b| e.gcd(b) < e).collect();
        let b = choices[rng.gen_range(0..choices.len())];
        e = e.gcd(&b);
        prev = b;
        beta.push(b);
    }
    CharExponents::new(beta).expect("valid by construction")
}

/// Branches with random exponents, coefficients and a consistent contact
/// table. Each branch attaches to an earlier one; contacts with the rest
/// follow from the tree of shared points.
pub fn random_branches<R: Rng + ?Sized>(rng: &mut R, cfg: &CorpusConfig) -> (Vec<BranchInput>, Contacts) {
    let n = rng.gen_range(1..=cfg.max_branches.max(1));
    let branches: Vec<BranchInput> = (0..n)
        .map(|i| {
            let c = rng.gen_range(1..=cfg.max_coefficient.max(1));
            BranchInput::new(format!("b{i}"), random_exponents(rng, cfg.max_beta0), c)
        })
        .collect();
    let seqs: Vec<_> = branches.iter().map(|b| multiplicity_sequence(&b.exponents)).collect();
    let mut c = vec![vec![0usize; n]; n];
    let mut contacts = Contacts::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let cap = seqs[i]
            .compatible_prefix(&seqs[j])
            .unwrap_or(seqs[i].len().max(seqs[j].len()) + 2)
            .max(1);
        let s = rng.gen_range(1..=cap);
        #[allow(clippy::needless_range_loop)]
        for k in 0..i {
            let v = if k == j { s } else { s.min(c[j][k]) };
            c[i][k] = v;
            c[k][i] = v;
            contacts.set(i, k, v);
        }
    }
    (branches, contacts)
}

/// A nonempty valid diagram, retrying until the random branch data is
/// admissible.
pub fn random_diagram<R: Rng + ?Sized>(rng: &mut R, cfg: &CorpusConfig) -> EnriquesDiagram {
    loop {
        let (branches, contacts) = random_branches(rng, cfg);
        if let Ok(d) = build_diagram(&branches, &contacts) {
            if !d.is_empty() {
                return d;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn exponents_stay_in_range() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..500 {
            let e = random_exponents(&mut rng, 12);
            assert!(e.multiplicity() <= 12);
            assert_eq!(*e.gcds().last().unwrap(), 1);
        }
    }

    #[test]
    fn diagrams_are_valid() {
        let mut rng = StdRng::seed_from_u64(11);
        let cfg = CorpusConfig {
            max_coefficient: 3,
            ..CorpusConfig::default()
        };
        let mut multi = 0;
        for _ in 0..100 {
            let d = random_diagram(&mut rng, &cfg);
            assert!(d.validate().is_empty());
            if d.branches().len() > 1 {
                multi += 1;
            }
        }
        assert!(multi > 20);
    }
}
