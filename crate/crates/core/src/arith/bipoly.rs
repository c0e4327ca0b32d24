use std::collections::BTreeMap;
use std::fmt;

use super::{Field, Rational, UniPoly};
use crate::error::{Error, Result};

/// Sparse bivariate polynomial; the key `(i, j)` is the monomial `x^i y^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly<F> {
    terms: BTreeMap<(u32, u32), F>,
}

impl<F: Field> BiPoly<F> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: F, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(F::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(F::one(), 0, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), F)>) -> Self {
        let mut p = Self::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: F) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(F::zero);
        *entry = entry.plus(&c);
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> F {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> Vec<(u32, u32)> {
        self.terms.keys().copied().collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, c.negated())).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, a)| (*k, a.times(c))))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                out.add_term(i + k, j + l, a.times(b));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(F::one()), |acc, _| acc.mul(self))
    }

    /// Order of vanishing at the origin (lowest total degree); `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).min()
    }

    /// Homogeneous component of total degree `d`, as the coefficients of
    /// `x^(d-k) y^k` for `k = 0..=d`.
    pub fn homogeneous_part(&self, d: u32) -> Vec<F> {
        (0..=d).map(|k| self.coeff(d - k, k)).collect()
    }

    pub fn eval(&self, x: &F, y: &F) -> F {
        self.terms.iter().fold(F::zero(), |acc, (&(i, j), c)| {
            acc.plus(&c.times(&pow(x, i)).times(&pow(y, j)))
        })
    }

    /// Substitutes univariate polynomials for both variables.
    pub fn compose(&self, x: &UniPoly<F>, y: &UniPoly<F>) -> UniPoly<F> {
        let max_i = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let xp = powers(x, max_i);
        let yp = powers(y, max_j);
        self.terms.iter().fold(UniPoly::zero(), |acc, (&(i, j), c)| {
            acc.add(&xp[i as usize].mul(&yp[j as usize]).scale(c))
        })
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
        }
    }

    /// Affine chart of the blowup: `p(u, u (v + c)) / u^m`, with `m` the
    /// order of `p` at the origin.
    pub fn blowup_affine(&self, c: &F) -> Self {
        let m = self.order().unwrap_or(0);
        let max_j = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let shifted = powers(&UniPoly::new(vec![c.clone(), F::one()]), max_j);
        let mut out = Self::zero();
        for (&(i, j), a) in &self.terms {
            for (l, b) in shifted[j as usize].coeffs().iter().enumerate() {
                out.add_term(i + j - m, l as u32, a.times(b));
            }
        }
        out
    }

    /// The other chart: `p(u v, v) / v^m`.
    pub fn blowup_vertical(&self) -> Self {
        let m = self.order().unwrap_or(0);
        Self::from_terms(self.terms.iter().map(|(&(i, j), a)| ((i, i + j - m), a.clone())))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> BiPoly<G> {
        BiPoly::from_terms(self.terms.iter().map(|(k, c)| (*k, f(c))))
    }

    fn deg_y(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// Coefficients in `y`, each a polynomial in `x`.
    fn y_coeffs(&self) -> Vec<UniPoly<F>> {
        let dy = self.deg_y() as usize;
        let mut cols: Vec<Vec<F>> = vec![Vec::new(); dy + 1];
        for (&(i, j), c) in &self.terms {
            let col = &mut cols[j as usize];
            if col.len() <= i as usize {
                col.resize(i as usize + 1, F::zero());
            }
            col[i as usize] = c.clone();
        }
        cols.into_iter().map(UniPoly::new).collect()
    }

    fn from_y_coeffs(cs: &[UniPoly<F>]) -> Self {
        let mut out = Self::zero();
        for (j, p) in cs.iter().enumerate() {
            for (i, c) in p.coeffs().iter().enumerate() {
                out.add_term(i as u32, j as u32, c.clone());
            }
        }
        out
    }

    pub fn display_with(&self, x: &str, y: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| (b.0 + b.1).cmp(&(a.0 + a.1)).then(b.0.cmp(&a.0)));
        let mut s = String::new();
        for (n, (i, j)) in keys.into_iter().enumerate() {
            let c = &self.terms[&(i, j)];
            let mut mono = Vec::new();
            for (var, e) in [(x, i), (y, j)] {
                match e {
                    0 => {}
                    1 => mono.push(var.to_string()),
                    _ => mono.push(format!("{var}^{e}")),
                }
            }
            let mono = mono.join("*");
            let cs = c.to_string();
            let (neg, body) = if mono.is_empty() {
                match cs.strip_prefix('-') {
                    Some(r) if !r.contains(['+', '-', ' ']) => (true, r.to_string()),
                    _ => (false, paren(&cs)),
                }
            } else if c.is_one() {
                (false, mono)
            } else if c.negated().is_one() {
                (true, mono)
            } else {
                match cs.strip_prefix('-') {
                    Some(r) if !r.contains(['+', '-', ' ']) => (true, format!("{r}*{mono}")),
                    _ => (false, format!("{}*{mono}", paren(&cs))),
                }
            };
            match (n, neg) {
                (0, true) => s.push_str(&format!("-{body}")),
                (0, false) => s.push_str(&body),
                (_, true) => s.push_str(&format!(" - {body}")),
                (_, false) => s.push_str(&format!(" + {body}")),
            }
        }
        s
    }
}

fn paren(s: &str) -> String {
    if s.contains(' ') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

fn pow<F: Field>(b: &F, e: u32) -> F {
    (0..e).fold(F::one(), |acc, _| acc.times(b))
}

fn powers<F: Field>(p: &UniPoly<F>, n: u32) -> Vec<UniPoly<F>> {
    let mut out = vec![UniPoly::one()];
    for k in 0..n as usize {
        out.push(out[k].mul(p));
    }
    out
}

impl<F: Field> fmt::Display for BiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x", "y"))
    }
}

/// One factor of the squarefree decomposition of a bivariate polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct SquarefreeFactor {
    pub factor: BiPoly<Rational>,
    pub multiplicity: u32,
}

type Col = UniPoly<Rational>;

fn content(cs: &[Col]) -> Result<Col> {
    let mut g = Col::zero();
    for c in cs {
        g = g.gcd(c)?;
    }
    Ok(g)
}

fn primitive_part(cs: &[Col]) -> Result<Vec<Col>> {
    let g = content(cs)?;
    let mut out: Vec<Col> = cs.iter().map(|c| c.div_exact(&g)).collect::<Result<_>>()?;
    trim_cols(&mut out);
    if let Some(l) = out.last().map(|c| c.leading()) {
        let inv = Field::inverse(&l)?;
        out = out.iter().map(|c| c.scale(&inv)).collect();
    }
    Ok(out)
}

fn trim_cols(v: &mut Vec<Col>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn eval_x(a: &[Col], x: &Rational) -> Col {
    UniPoly::new(a.iter().map(|c| c.eval(x)).collect())
}

/// gcd in `Q[x][y]` of two polynomials primitive in `y`, by evaluating `x`
/// at integers, taking gcds in `Q[y]` and interpolating.
///
/// Specializations keep the `y`-degree of the gcd whenever both leading
/// coefficients survive, except at finitely many unlucky points, which give
/// a larger degree; the least degree seen is kept and the interpolant is
/// confirmed by exact division.
fn primitive_gcd(a: &[Col], b: &[Col]) -> Result<Vec<Col>> {
    let (la, lb) = (a.last().unwrap(), b.last().unwrap());
    let gamma = la.gcd(lb)?;
    let deg_x = |v: &[Col]| v.iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    let mut needed = gamma.deg() + deg_x(a).min(deg_x(b)) + 1;
    let mut points: Vec<(Rational, Col)> = Vec::new();
    let mut best = usize::MAX;
    let mut x = 0i64;
    loop {
        let xr = Rational::from_integer(x.into());
        x += 1;
        if la.eval(&xr).is_zero() || lb.eval(&xr).is_zero() {
            continue;
        }
        let g = eval_x(a, &xr).gcd(&eval_x(b, &xr))?;
        if g.deg() == 0 {
            return Ok(vec![Col::one()]);
        }
        if g.deg() > best {
            continue;
        }
        if g.deg() < best {
            best = g.deg();
            points.clear();
        }
        points.push((xr.clone(), g.scale(&gamma.eval(&xr))));
        if points.len() < needed {
            continue;
        }
        let xs: Vec<Rational> = points.iter().map(|p| p.0.clone()).collect();
        let cols = (0..=best)
            .map(|j| {
                let ys: Vec<Rational> = points.iter().map(|p| p.1.coeff(j)).collect();
                UniPoly::interpolate(&xs, &ys)
            })
            .collect::<Result<Vec<Col>>>()?;
        let g = primitive_part(&cols)?;
        if div_exact_cols(a, &g).is_ok() && div_exact_cols(b, &g).is_ok() {
            return Ok(g);
        }
        needed += 1;
    }
}

fn div_exact_cols(a: &[Col], b: &[Col]) -> Result<Vec<Col>> {
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut r = a.to_vec();
    if r.len() <= db {
        return Ok(vec![]);
    }
    let mut q = vec![Col::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i].div_exact(lb)?;
        for (k, bc) in b.iter().enumerate() {
            r[i - db + k] = r[i - db + k].sub(&c.mul(bc));
        }
        q[i - db] = c;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return Err(Error::Invariant("inexact bivariate division".into()));
    }
    trim_cols(&mut q);
    Ok(q)
}

fn dy(a: &[Col]) -> Vec<Col> {
    let mut v: Vec<Col> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c.scale(&Rational::from_integer((j as i64).into())))
        .collect();
    trim_cols(&mut v);
    v
}

impl BiPoly<Rational> {
    /// Squarefree decomposition over the rationals: pairwise coprime
    /// squarefree factors with multiplicities, up to a rational unit.
    /// Only factors that vanish at the origin are kept when `local` is set.
    pub fn squarefree_decomposition(&self, local: bool) -> Result<Vec<SquarefreeFactor>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let cols = self.y_coeffs();
        let cont = content(&cols)?;
        let mut out = Vec::new();
        for (c, mult) in cont.squarefree_part()? {
            out.push(SquarefreeFactor {
                factor: BiPoly::from_y_coeffs(&[c]),
                multiplicity: mult as u32,
            });
        }
        let f = primitive_part(&cols)?;
        if f.len() > 1 {
            let df = dy(&f);
            let a0 = primitive_gcd(&f, &df)?;
            let mut b = div_exact_cols(&f, &a0)?;
            let c = div_exact_cols(&df, &a0)?;
            let mut d: Vec<Col> = sub_cols(&c, &dy(&b));
            let mut i = 1;
            while b.len() > 1 {
                let a = if d.is_empty() { b.clone() } else { primitive_gcd(&b, &d)? };
                b = div_exact_cols(&b, &a)?;
                let c = if d.is_empty() { vec![] } else { div_exact_cols(&d, &a)? };
                d = sub_cols(&c, &dy(&b));
                if a.len() > 1 {
                    out.push(SquarefreeFactor {
                        factor: BiPoly::from_y_coeffs(&a),
                        multiplicity: i,
                    });
                }
                i += 1;
            }
        }
        if local {
            out.retain(|s| s.factor.coeff(0, 0).is_zero());
        }
        Ok(out)
    }
}

fn sub_cols(a: &[Col], b: &[Col]) -> Vec<Col> {
    let n = a.len().max(b.len());
    let mut v: Vec<Col> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Col::zero);
            let y = b.get(i).cloned().unwrap_or_else(Col::zero);
            x.sub(&y)
        })
        .collect();
    trim_cols(&mut v);
    v
}
