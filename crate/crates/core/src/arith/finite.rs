//! Dense polynomials over `Z/p` (small prime) and `Z/M` (big modulus),
//! Cantor–Zassenhaus factorization mod `p`, and quadratic Hensel lifting.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

pub(crate) type Fp = Vec<u64>;

fn trim(v: &mut Fp) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

pub(crate) fn fp_from_int(coeffs: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    let mut v: Fp = coeffs
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    trim(&mut v);
    v
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut v: Fp = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut v);
    v
}

pub(crate) fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % p;
        }
    }
    trim(&mut v);
    v
}

pub(crate) fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = b.len() - 1;
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let idx = i - db + j;
            r[idx] = (r[idx] + p - c * y % p) % p;
        }
        q[i - db] = c;
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = inv_mod(l, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

pub(crate) fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = std::mem::replace(&mut b, r);
    }
    fp_monic(&a, p)
}

/// Returns `(s, t)` with `s*a + t*b = 1` for coprime `a`, `b`.
pub(crate) fn fp_bezout(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    debug_assert_eq!(r0.len(), 1, "Bezout inputs must be coprime");
    let inv = inv_mod(r0[0], p);
    let sc = |v: &Fp| -> Fp { v.iter().map(|&c| c * inv % p).collect() };
    (sc(&s0), sc(&t0))
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    let mut v: Fp = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| (i as u64 % p) * c % p)
        .collect();
    trim(&mut v);
    v
}

pub(crate) fn fp_is_squarefree(a: &Fp, p: u64) -> bool {
    fp_gcd(a, &fp_derivative(a, p), p).len() == 1
}

fn fp_powmod(base: &Fp, e: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut acc: Fp = vec![1];
    let base = fp_divrem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        acc = fp_divrem(&fp_mul(&acc, &acc, p), m, p).1;
        if e.bit(i) {
            acc = fp_divrem(&fp_mul(&acc, &base, p), m, p).1;
        }
    }
    acc
}

/// Monic irreducible factors of a monic squarefree polynomial mod an odd prime.
pub(crate) fn fp_factor(f: &Fp, p: u64, rng: &mut impl Rng) -> Vec<Fp> {
    let mut out = Vec::new();
    let mut rest = fp_monic(f, p);
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let pb = BigUint::from(p);
    let mut d = 1usize;
    while rest.len() > 2 * d {
        h = fp_powmod(&h, &pb, &rest, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            equal_degree(&g, d, p, rng, &mut out);
            rest = fp_divrem(&rest, &g, p).0;
            h = fp_divrem(&h, &rest, p).1;
        }
        d += 1;
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    out
}

fn equal_degree(g: &Fp, d: usize, p: u64, rng: &mut impl Rng, out: &mut Vec<Fp>) {
    let n = g.len() - 1;
    if n == d {
        out.push(g.clone());
        return;
    }
    let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let mut a: Fp = (0..n).map(|_| rng.gen_range(0..p)).collect();
        trim(&mut a);
        if a.len() < 2 {
            continue;
        }
        let b = fp_sub(&fp_powmod(&a, &e, g, p), &vec![1], p);
        let c = fp_gcd(&b, g, p);
        if c.len() > 1 && c.len() < g.len() {
            let other = fp_divrem(g, &c, p).0;
            equal_degree(&c, d, p, rng, out);
            equal_degree(&fp_monic(&other, p), d, p, rng, out);
            return;
        }
    }
}

// ---- Z / M ----

pub(crate) type Zm = Vec<BigInt>;

fn zm_trim(v: &mut Zm) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub(crate) fn zm_reduce(a: &[BigInt], m: &BigInt) -> Zm {
    let mut v: Zm = a.iter().map(|c| c.mod_floor(m)).collect();
    zm_trim(&mut v);
    v
}

fn zm_add(a: &Zm, b: &Zm, m: &BigInt) -> Zm {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Zm = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
        .collect();
    zm_reduce(&v, m)
}

fn zm_sub(a: &Zm, b: &Zm, m: &BigInt) -> Zm {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Zm = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
        .collect();
    zm_reduce(&v, m)
}

pub(crate) fn zm_mul(a: &Zm, b: &Zm, m: &BigInt) -> Zm {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    zm_reduce(&v, m)
}

/// Division by a monic polynomial mod `m`.
fn zm_divrem_monic(a: &Zm, b: &Zm, m: &BigInt) -> (Zm, Zm) {
    let db = b.len() - 1;
    debug_assert!(b.last().unwrap().is_one());
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let idx = i - db + j;
            r[idx] = (&r[idx] - &c * y).mod_floor(m);
        }
        q[i - db] = c;
    }
    r.truncate(db);
    (zm_reduce(&q, m), zm_reduce(&r, m))
}

/// One quadratic Hensel step: from `f = g h (mod m)`, `s g + t h = 1 (mod m)`
/// with `h` monic, produce the same identities modulo `m^2`.
fn hensel_step(f: &Zm, g: &Zm, h: &Zm, s: &Zm, t: &Zm, m: &BigInt) -> (Zm, Zm, Zm, Zm) {
    let m2 = m * m;
    let e = zm_sub(&zm_reduce(f, &m2), &zm_mul(g, h, &m2), &m2);
    let (q, r) = zm_divrem_monic(&zm_mul(s, &e, &m2), h, &m2);
    let g1 = zm_add(g, &zm_add(&zm_mul(t, &e, &m2), &zm_mul(&q, g, &m2), &m2), &m2);
    let h1 = zm_add(h, &r, &m2);
    let b = zm_sub(
        &zm_add(&zm_mul(s, &g1, &m2), &zm_mul(t, &h1, &m2), &m2),
        &vec![BigInt::one()],
        &m2,
    );
    let (c, d) = zm_divrem_monic(&zm_mul(s, &b, &m2), &h1, &m2);
    let s1 = zm_sub(s, &d, &m2);
    let t1 = zm_sub(&zm_sub(t, &zm_mul(t, &b, &m2), &m2), &zm_mul(&c, &g1, &m2), &m2);
    (g1, h1, s1, t1)
}

fn fp_to_zm(a: &Fp) -> Zm {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts the modular factorization `f = lc(f) * prod(factors) (mod p)` to
/// monic factors modulo `p^(2^k) >= target`. Returns the lifted factors and
/// the final modulus.
pub(crate) fn hensel_lift(f: &[BigInt], factors: &[Fp], p: u64, target: &BigInt) -> (Vec<Zm>, BigInt) {
    let mut modulus = BigInt::from(p);
    while &modulus < target {
        modulus = &modulus * &modulus;
    }
    let mut out = Vec::new();
    lift_rec(f, factors, p, &modulus, &mut out);
    (out, modulus)
}

fn lift_rec(f: &[BigInt], factors: &[Fp], p: u64, modulus: &BigInt, out: &mut Vec<Zm>) {
    let lc = f.last().unwrap().clone();
    if factors.len() == 1 {
        let inv = lc
            .modinv(modulus)
            .expect("leading coefficient is a unit modulo p");
        let v: Zm = f.iter().map(|c| c * &inv).collect();
        out.push(zm_reduce(&v, modulus));
        return;
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let lc_p = lc.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let g0 = left
        .iter()
        .fold(vec![lc_p], |acc, u| fp_mul(&acc, u, p));
    let h0 = right.iter().fold(vec![1u64], |acc, u| fp_mul(&acc, u, p));
    let (s0, t0) = fp_bezout(&g0, &h0, p);
    let (mut g, mut h, mut s, mut t) = (fp_to_zm(&g0), fp_to_zm(&h0), fp_to_zm(&s0), fp_to_zm(&t0));
    let mut m = BigInt::from(p);
    while &m < modulus {
        (g, h, s, t) = hensel_step(&f.to_vec(), &g, &h, &s, &t, &m);
        m = &m * &m;
    }
    // g now carries lc(f) as its leading coefficient mod `modulus`.
    lift_rec(&symmetric(&g, modulus), left, p, modulus, out);
    lift_rec(&symmetric(&h, modulus), right, p, modulus, out);
}

/// Symmetric representatives in `(-m/2, m/2]`.
pub(crate) fn symmetric(a: &[BigInt], m: &BigInt) -> Zm {
    let half = m / 2;
    let mut v: Zm = a
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    zm_trim(&mut v);
    v
}

pub(crate) fn max_abs(a: &[BigInt]) -> BigInt {
    a.iter().map(|c| c.abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn factors_mod_seven() {
        // t^4 - 1 = (t-1)(t+1)(t^2+1) mod 7 (t^2+1 irreducible since 7 = 3 mod 4)
        let p = 7;
        let f = fp_from_int(&[-1, 0, 0, 0, 1].map(BigInt::from), p);
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let mut fs = fp_factor(&f, p, &mut rng);
        fs.sort();
        assert_eq!(fs, vec![vec![1, 0, 1], vec![1, 1], vec![6, 1]]);
    }

    #[test]
    fn lifted_factors_multiply_back() {
        // (t^2 - 2)(t + 3) with p = 5 lifted to 5^8
        let f: Vec<BigInt> = [-6, -2, 3, 1].map(BigInt::from).to_vec();
        let p = 5;
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let fs = fp_factor(&fp_from_int(&f, p), p, &mut rng);
        let (lifted, m) = hensel_lift(&f, &fs, p, &BigInt::from(390625));
        let prod = lifted.iter().fold(vec![BigInt::one()], |acc, u| zm_mul(&acc, u, &m));
        assert_eq!(prod, zm_reduce(&f, &m));
    }
}
