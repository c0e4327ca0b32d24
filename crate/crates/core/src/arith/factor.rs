//! Factorization over the rationals (Zassenhaus: factor mod p, Hensel lift,
//! recombine) and over towers of simple extensions (Trager's norm method).

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;

use super::finite::{fp_factor, fp_from_int, fp_is_squarefree, hensel_lift, max_abs, symmetric, zm_mul, zm_reduce};
use super::{Elem, Field, Rational, SimpleExtension, UniPoly};
use crate::error::{Error, Result};

const FACTOR_SEED: u64 = 0x5eed_f00d;

/// Monic irreducible factors of `p` over the rationals, repeated according
/// to multiplicity.
pub fn factor_rational(p: &UniPoly<Rational>) -> Result<Vec<UniPoly<Rational>>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (part, mult) in p.squarefree_part()? {
        for f in factor_squarefree_int(&to_primitive_int(&part)) {
            let monic = from_int(&f).monic()?;
            for _ in 0..mult {
                out.push(monic.clone());
            }
        }
    }
    out.sort_by(|a, b| a.deg().cmp(&b.deg()).then_with(|| cmp_coeffs(a, b)));
    Ok(out)
}

fn cmp_coeffs(a: &UniPoly<Rational>, b: &UniPoly<Rational>) -> std::cmp::Ordering {
    a.coeffs().iter().cmp(b.coeffs().iter())
}

fn to_primitive_int(p: &UniPoly<Rational>) -> Vec<BigInt> {
    let den = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
        .collect();
    primitive(&ints)
}

fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let mut out: Vec<BigInt> = v.iter().map(|c| c / &g).collect();
    if out.last().is_some_and(|c| c.is_negative()) {
        out.iter_mut().for_each(|c| *c = -c.clone());
    }
    out
}

fn from_int(v: &[BigInt]) -> UniPoly<Rational> {
    UniPoly::new(v.iter().map(|c| Rational::from_integer(c.clone())).collect())
}

/// Exact division over the integers, `None` if `b` does not divide `a`.
fn int_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut r = a.to_vec();
    if r.len() <= db {
        return None;
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let (c, rem) = r[i].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, y) in b.iter().enumerate() {
            r[i - db + j] -= &c * y;
        }
        q[i - db] = c;
    }
    if r.iter().all(|c| c.is_zero()) {
        Some(q)
    } else {
        None
    }
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Irreducible factors over the integers of a primitive squarefree polynomial.
fn factor_squarefree_int(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut f = f.to_vec();
    // strip the factor t, which mod-p methods would see as a repeated content
    if f.len() > 1 && f[0].is_zero() {
        out.push(vec![BigInt::zero(), BigInt::one()]);
        f.remove(0);
    }
    let n = f.len() - 1;
    if n == 0 {
        return out;
    }
    if n == 1 {
        out.push(f);
        return out;
    }
    let lc = f.last().unwrap().clone();
    let p = small_primes()
        .find(|&p| {
            !(&lc % BigInt::from(p)).is_zero() && {
                let fp = fp_from_int(&f, p);
                fp.len() == f.len() && fp_is_squarefree(&fp, p)
            }
        })
        .expect("some prime keeps the polynomial squarefree");
    let mut rng = rand::rngs::StdRng::seed_from_u64(FACTOR_SEED);
    let modular = fp_factor(&fp_from_int(&f, p), p, &mut rng);
    if modular.len() == 1 {
        out.push(f);
        return out;
    }
    // factor coefficients are bounded by 2^n * (n + 1) * |f|_inf (Mignotte)
    let bound = lc.abs() * (BigInt::one() << n) * BigInt::from(n + 1) * max_abs(&f);
    let target = bound * 2 + 1;
    let (mut lifted, modulus) = hensel_lift(&f, &modular, p, &target);

    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = None;
        for subset in combinations(lifted.len(), size) {
            let lc_cur = f.last().unwrap().clone();
            let prod = subset
                .iter()
                .fold(vec![lc_cur], |acc, &i| zm_mul(&acc, &lifted[i], &modulus));
            let cand = primitive(&symmetric(&zm_reduce(&prod, &modulus), &modulus));
            if let Some(q) = int_div_exact(&f, &cand) {
                found = Some((subset, cand, q));
                break;
            }
        }
        match found {
            Some((subset, cand, q)) => {
                out.push(cand);
                f = q;
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, u)| u)
                    .collect();
            }
            None => size += 1,
        }
    }
    out.push(primitive(&f));
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Monic irreducible factors of `f` over `field` (the rationals when `None`),
/// repeated according to multiplicity.
pub fn factor_over(f: &UniPoly<Elem>, field: Option<&Arc<SimpleExtension>>) -> Result<Vec<UniPoly<Elem>>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (part, mult) in f.squarefree_part()? {
        let factors = match field {
            None => {
                let q = part.map(|c| {
                    c.as_rational()
                        .cloned()
                        .expect("coefficients of a rational polynomial")
                });
                factor_rational(&q)?
                    .into_iter()
                    .map(|g| g.map(|c| Elem::Rat(c.clone())))
                    .collect()
            }
            Some(ext) => trager(&part, ext)?,
        };
        for g in factors {
            for _ in 0..mult {
                out.push(g.clone());
            }
        }
    }
    Ok(out)
}

/// Norm of `g` from `ext` down to its base field: `Res_y(m(y), g~(x, y))`
/// where `g~` replaces the generator by `y`. Computed by evaluation at
/// rational points and interpolation over the base.
fn norm(g: &UniPoly<Elem>, ext: &Arc<SimpleExtension>) -> Result<UniPoly<Elem>> {
    let m = ext.modulus();
    let n = g.deg() * ext.degree();
    let lifted: Vec<UniPoly<Elem>> = g.coeffs().iter().map(|c| c.residue_in(ext)).collect();
    let mut xs = Vec::with_capacity(n + 1);
    let mut ys = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let x0 = Elem::from_int(i as i64);
        // sum_k lifted[k](y) * x0^k, a polynomial in y over the base
        let mut acc = UniPoly::zero();
        for c in lifted.iter().rev() {
            acc = acc.scale(&x0).add(c);
        }
        ys.push(m.resultant(&acc)?);
        xs.push(x0);
    }
    UniPoly::interpolate(&xs, &ys)
}

fn trager(f: &UniPoly<Elem>, ext: &Arc<SimpleExtension>) -> Result<Vec<UniPoly<Elem>>> {
    if f.deg() <= 1 {
        return Ok(vec![f.monic()?]);
    }
    let alpha = ext.generator();
    let base = ext.base();
    for s in shifts() {
        let shift = alpha.times(&Elem::from_int(s));
        // g(x) = f(x - s*alpha)
        let g = f.shift(&shift.negated());
        let n = norm(&g, ext)?;
        if !n.is_squarefree()? {
            continue;
        }
        let mut out = Vec::new();
        let mut rest = g.clone();
        for h in factor_over(&n, base)? {
            let common = rest.gcd(&h)?;
            if common.is_constant() {
                continue;
            }
            rest = rest.div_exact(&common)?;
            out.push(common.shift(&shift).monic()?);
        }
        if !rest.is_constant() {
            return Err(Error::Invariant(format!("norm factorization left cofactor {rest}")));
        }
        return Ok(out);
    }
    unreachable!("shifts() is infinite")
}

fn shifts() -> impl Iterator<Item = i64> {
    (0..).flat_map(|k: i64| if k == 0 { vec![0] } else { vec![k, -k] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    type P = UniPoly<Rational>;

    fn product(fs: &[P]) -> P {
        fs.iter().fold(P::one(), |acc, f| acc.mul(f))
    }

    #[test]
    fn rational_examples() {
        let f = P::from_ints(&[-1, 0, 0, 1]);
        assert_eq!(
            factor_rational(&f).unwrap(),
            vec![P::from_ints(&[-1, 1]), P::from_ints(&[1, 1, 1])]
        );
        let f = P::from_ints(&[1, 0, 1]);
        assert_eq!(factor_rational(&f).unwrap(), vec![f.clone()]);
        let f = P::from_ints(&[-1, 0, 1]);
        assert_eq!(
            factor_rational(&f).unwrap(),
            vec![P::from_ints(&[-1, 1]), P::from_ints(&[1, 1])]
        );
        assert_eq!(factor_rational(&P::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn swinnerton_dyer_like_inputs_stay_whole() {
        // t^4 - 10 t^2 + 1 is irreducible over Q but splits mod every prime
        let f = P::from_ints(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_rational(&f).unwrap(), vec![f]);
    }

    #[test]
    fn cyclotomic_split() {
        // t^12 - 1 = product of cyclotomic polynomials of orders 1,2,3,4,6,12
        let mut c = vec![0i64; 13];
        c[0] = -1;
        c[12] = 1;
        let f = P::from_ints(&c);
        let fs = factor_rational(&f).unwrap();
        assert_eq!(fs.len(), 6);
        assert_eq!(product(&fs), f);
        let degs: Vec<usize> = fs.iter().map(|g| g.deg()).collect();
        assert_eq!(degs, vec![1, 1, 2, 2, 2, 4]);
    }

    #[test]
    fn rational_coefficients_and_repeats() {
        let f = P::new(vec![rat(1, 4), rat(0, 1), rat(-1, 1)]).mul(&P::from_ints(&[0, 1]).pow(2));
        let fs = factor_rational(&f).unwrap();
        assert_eq!(product(&fs), f.monic().unwrap());
        assert_eq!(fs.len(), 4);
    }

    #[test]
    fn factor_over_quadratic_field() {
        let k = SimpleExtension::over_rationals(&P::from_ints(&[-2, 0, 1])).unwrap();
        // t^4 - 4 = (t^2 - 2)(t^2 + 2) = (t - a)(t + a)(t^2 + 2) over Q(a), a^2 = 2
        let f: UniPoly<Elem> = P::from_ints(&[-4, 0, 0, 0, 1]).map(|c| Elem::Rat(c.clone()));
        let fs = factor_over(&f, Some(&k)).unwrap();
        assert_eq!(fs.len(), 3);
        let prod = fs.iter().fold(UniPoly::one(), |acc, g| acc.mul(g));
        assert_eq!(prod, f);
        let linear: Vec<_> = fs.iter().filter(|g| g.deg() == 1).collect();
        assert_eq!(linear.len(), 2);
        for g in linear {
            let root = g.coeff(0).negated();
            assert_eq!(root.times(&root), Elem::from_int(2));
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(40))]
        #[test]
        fn factors_multiply_back(
            a in proptest::collection::vec(-6i64..6, 1..5),
            b in proptest::collection::vec(-6i64..6, 1..5),
            c in proptest::collection::vec(-6i64..6, 1..4),
        ) {
            let f = P::from_ints(&a).mul(&P::from_ints(&b)).mul(&P::from_ints(&c));
            proptest::prop_assume!(!f.is_zero());
            let fs = factor_rational(&f).unwrap();
            proptest::prop_assert_eq!(product(&fs), f.monic().unwrap());
            for g in &fs {
                // every reported factor is irreducible: no proper factor found twice
                let again = factor_rational(g).unwrap();
                proptest::prop_assert_eq!(again.len(), 1);
            }
        }
    }
}
