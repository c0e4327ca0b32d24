use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::{factor_over, Field, Rational, UniPoly};
use crate::error::{Error, Result};

/// Default maximal height of an extension tower above the rationals.
pub const DEFAULT_DEPTH_LIMIT: usize = 2;

/// `L[t]/(m(t))` for an irreducible `m` over the base field `L`, where `L` is
/// either the rationals (`base == None`) or another simple extension.
#[derive(Debug)]
pub struct SimpleExtension {
    base: Option<Arc<SimpleExtension>>,
    modulus: UniPoly<Elem>,
    depth: usize,
}

impl SimpleExtension {
    /// Adjoins a root of `modulus`. Fails when `modulus` is reducible over the
    /// base, has degree below 2, or the tower would exceed `depth_limit`.
    pub fn new(
        base: Option<Arc<SimpleExtension>>,
        modulus: UniPoly<Elem>,
        depth_limit: usize,
    ) -> Result<Arc<Self>> {
        let depth = base.as_ref().map_or(0, |b| b.depth) + 1;
        if depth > depth_limit {
            return Err(Error::ExtensionDepthExceeded {
                limit: depth_limit,
                poly: modulus.display_in("z"),
            });
        }
        let d = modulus.deg();
        if d < 2 {
            return Err(Error::DegenerateModulus(d));
        }
        let modulus = modulus.monic()?;
        let factors = factor_over(&modulus, base.as_ref())?;
        if factors.len() != 1 {
            return Err(Error::ReducibleModulus(modulus.display_in("z")));
        }
        Ok(Arc::new(Self {
            base,
            modulus,
            depth,
        }))
    }

    /// Simple extension of the rationals by a root of `modulus`.
    pub fn over_rationals(modulus: &UniPoly<Rational>) -> Result<Arc<Self>> {
        Self::new(None, modulus.map(|c| Elem::Rat(c.clone())), DEFAULT_DEPTH_LIMIT)
    }

    pub fn base(&self) -> Option<&Arc<SimpleExtension>> {
        self.base.as_ref()
    }

    pub fn modulus(&self) -> &UniPoly<Elem> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The class of `t`.
    pub fn generator(self: &Arc<Self>) -> Elem {
        self.reduce(&UniPoly::x())
    }

    /// Canonical residue of a polynomial in the generator.
    pub fn reduce(self: &Arc<Self>, p: &UniPoly<Elem>) -> Elem {
        let r = p.rem(&self.modulus).expect("modulus is nonzero");
        Elem::normalize(self, r)
    }

    fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b)
            || (a.depth == b.depth
                && a.modulus == b.modulus
                && match (&a.base, &b.base) {
                    (None, None) => true,
                    (Some(x), Some(y)) => Self::same(x, y),
                    _ => false,
                })
    }
}

/// Element of a tower of simple extensions of the rationals.
///
/// Elements are normalized: a residue of degree 0 collapses to its
/// coefficient, so every value has one representation and equality is
/// structural.
#[derive(Clone, Debug)]
pub enum Elem {
    Rat(Rational),
    Alg(Arc<SimpleExtension>, UniPoly<Elem>),
}

impl Elem {
    fn normalize(ext: &Arc<SimpleExtension>, residue: UniPoly<Elem>) -> Elem {
        if residue.is_constant() {
            residue.coeff(0)
        } else {
            Elem::Alg(ext.clone(), residue)
        }
    }

    pub fn level(&self) -> usize {
        match self {
            Elem::Rat(_) => 0,
            Elem::Alg(e, _) => e.depth,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Elem::Rat(r) => Some(r),
            Elem::Alg(..) => None,
        }
    }

    /// The field this element lives in (`None` for the rationals).
    pub fn field(&self) -> Option<&Arc<SimpleExtension>> {
        match self {
            Elem::Rat(_) => None,
            Elem::Alg(e, _) => Some(e),
        }
    }

    /// Residue of `self` viewed inside `ext` (which must contain it).
    pub fn residue_in(&self, ext: &Arc<SimpleExtension>) -> UniPoly<Elem> {
        match self {
            Elem::Alg(e, p) if SimpleExtension::same(e, ext) => p.clone(),
            Elem::Alg(e, _) if e.depth >= ext.depth => {
                panic!("element of an unrelated extension used in arithmetic")
            }
            _ => UniPoly::constant(self.clone()),
        }
    }

    fn binary(
        a: &Elem,
        b: &Elem,
        rat_op: impl Fn(&Rational, &Rational) -> Rational,
        poly_op: impl Fn(&UniPoly<Elem>, &UniPoly<Elem>) -> UniPoly<Elem>,
    ) -> Elem {
        if let (Elem::Rat(x), Elem::Rat(y)) = (a, b) {
            return Elem::Rat(rat_op(x, y));
        }
        let ext = if a.level() >= b.level() {
            a.field()
        } else {
            b.field()
        }
        .expect("one operand is algebraic")
        .clone();
        let pa = a.residue_in(&ext);
        let pb = b.residue_in(&ext);
        ext.reduce(&poly_op(&pa, &pb))
    }
}

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Elem::Rat(a), Elem::Rat(b)) => a == b,
            (Elem::Alg(e1, p1), Elem::Alg(e2, p2)) => SimpleExtension::same(e1, e2) && p1 == p2,
            _ => false,
        }
    }
}

impl Field for Elem {
    fn zero() -> Self {
        Elem::Rat(<Rational as Zero>::zero())
    }
    fn one() -> Self {
        Elem::Rat(<Rational as Field>::one())
    }
    fn is_zero(&self) -> bool {
        matches!(self, Elem::Rat(r) if Zero::is_zero(r))
    }
    fn plus(&self, other: &Self) -> Self {
        Elem::binary(self, other, |x, y| x + y, |p, q| p.add(q))
    }
    fn minus(&self, other: &Self) -> Self {
        Elem::binary(self, other, |x, y| x - y, |p, q| p.sub(q))
    }
    fn times(&self, other: &Self) -> Self {
        Elem::binary(self, other, |x, y| x * y, |p, q| p.mul(q))
    }
    fn negated(&self) -> Self {
        match self {
            Elem::Rat(r) => Elem::Rat(-r),
            Elem::Alg(e, p) => Elem::Alg(e.clone(), p.neg()),
        }
    }
    fn inverse(&self) -> Result<Self> {
        match self {
            Elem::Rat(r) => Ok(Elem::Rat(Field::inverse(r)?)),
            Elem::Alg(e, p) => {
                let (g, s, _) = p.ext_gcd(&e.modulus)?;
                if !g.is_constant() {
                    return Err(Error::ReducibleModulus(e.modulus.display_in("z")));
                }
                Ok(e.reduce(&s))
            }
        }
    }
    fn from_rational(r: &Rational) -> Self {
        Elem::Rat(r.clone())
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Rat(r) => write!(f, "{r}"),
            Elem::Alg(e, p) => write!(f, "{}", p.display_in(&format!("z{}", e.depth))),
        }
    }
}

impl From<Rational> for Elem {
    fn from(r: Rational) -> Self {
        Elem::Rat(r)
    }
}
