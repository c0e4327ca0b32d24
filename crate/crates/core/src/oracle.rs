//! Newton polygon multiplier ideals of nondegenerate polynomials, an
//! independent check on the resolution-based jumping numbers below 1.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{BiPoly, Rational, UniPoly};
use crate::error::{Error, Result};

/// A compact edge on the line `p x + q y = c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub p: u64,
    pub q: u64,
    pub c: u64,
    pub from: (u32, u32),
    pub to: (u32, u32),
}

/// Boundary of the Newton polyhedron `conv(support) + R^2_{>=0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Vertices from the top-left to the bottom-right.
    pub vertices: Vec<(u32, u32)>,
    /// Compact edges in the same order, i.e. by increasing slope.
    pub edges: Vec<Edge>,
}

impl NewtonPolygon {
    /// Smallest `x` on the polyhedron (the vertical facet).
    pub fn x_min(&self) -> u32 {
        self.vertices[0].0
    }

    pub fn y_min(&self) -> u32 {
        self.vertices.last().unwrap().1
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

pub fn polygon(f: &BiPoly<Rational>) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.coeff(0, 0).is_zero() {
        return Err(Error::UnitAtOrigin);
    }
    let mut pts: Vec<(u32, u32)> = f.support();
    pts.sort_unstable();
    let mut hull: Vec<(u32, u32)> = Vec::new();
    let y_min = pts.iter().map(|p| p.1).min().unwrap();
    for &pt in &pts {
        // only the staircase from the leftmost lowest point down to the
        // first point of minimal height matters
        if let Some(&last) = hull.last() {
            if pt.1 >= last.1 {
                continue;
            }
        }
        while hull.len() >= 2 {
            let n = hull.len();
            let o = (hull[n - 2].0 as i64, hull[n - 2].1 as i64);
            let a = (hull[n - 1].0 as i64, hull[n - 1].1 as i64);
            if cross(o, a, (pt.0 as i64, pt.1 as i64)) <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
        if pt.1 == y_min {
            break;
        }
    }
    let edges = hull
        .windows(2)
        .map(|w| {
            let (x1, y1) = w[0];
            let (x2, y2) = w[1];
            let (dx, dy) = ((x2 - x1) as u64, (y1 - y2) as u64);
            let g = dx.gcd(&dy);
            let (p, q) = (dy / g, dx / g);
            Edge {
                p,
                q,
                c: p * x1 as u64 + q * y1 as u64,
                from: w[0],
                to: w[1],
            }
        })
        .collect();
    Ok(NewtonPolygon {
        vertices: hull,
        edges,
    })
}

/// Restriction of `f` to an edge as a polynomial in one variable.
pub fn edge_polynomial(f: &BiPoly<Rational>, e: &Edge) -> UniPoly<Rational> {
    let steps = (e.to.0 - e.from.0) as u64 / e.q;
    UniPoly::new(
        (0..=steps)
            .map(|k| f.coeff(e.from.0 + (k * e.q) as u32, e.from.1 - (k * e.p) as u32))
            .collect(),
    )
}

/// Every edge polynomial is squarefree (its end coefficients are nonzero,
/// so no roots lie on the axes).
pub fn nondegenerate(f: &BiPoly<Rational>, poly: &NewtonPolygon) -> Result<bool> {
    for e in &poly.edges {
        if !edge_polynomial(f, e).is_squarefree()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Supremum of the `λ` for which `x^a y^b` is not in the multiplier ideal:
/// the least `λ` putting `(a+1, b+1)` on the boundary of `λ` times the
/// polyhedron.
pub fn monomial_threshold(poly: &NewtonPolygon, a: u32, b: u32) -> Rational {
    let (u, v) = (a as u64 + 1, b as u64 + 1);
    let mut best: Option<Rational> = None;
    let mut consider = |num: u64, den: u64| {
        if den > 0 {
            let r = Rational::new(num.into(), den.into());
            if best.as_ref().is_none_or(|b| &r < b) {
                best = Some(r);
            }
        }
    };
    for e in &poly.edges {
        consider(e.p * u + e.q * v, e.c);
    }
    consider(u, poly.x_min() as u64);
    consider(v, poly.y_min() as u64);
    best.expect("a polynomial vanishing at the origin has a facet of positive level")
}

/// Jumping numbers in `(0, bound] ∩ (0, 1)` of a nondegenerate polynomial.
pub fn oracle_jumping_numbers(f: &BiPoly<Rational>, bound: &Rational) -> Result<Vec<Rational>> {
    if !(bound > &Rational::zero() && bound <= &Rational::one()) {
        return Err(Error::BadBound("(0, 1]".into()));
    }
    let poly = polygon(f)?;
    if !nondegenerate(f, &poly)? {
        return Err(Error::Degenerate);
    }
    let one = Rational::one();
    let keep = |t: &Rational| t <= bound && t < &one;
    let mut out = BTreeSet::new();
    let mut a = 0;
    while keep(&monomial_threshold(&poly, a, 0)) {
        let mut b = 0;
        loop {
            let t = monomial_threshold(&poly, a, b);
            if !keep(&t) {
                break;
            }
            out.insert(t);
            b += 1;
        }
        a += 1;
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Field};

    fn bp(terms: &[(u32, u32, i64)]) -> BiPoly<Rational> {
        BiPoly::from_terms(terms.iter().map(|&(i, j, c)| ((i, j), Rational::from_int(c))))
    }

    fn two_cusps() -> BiPoly<Rational> {
        bp(&[(3, 0, 1), (0, 2, -1)]).mul(&bp(&[(2, 0, 1), (0, 3, -1)]))
    }

    #[test]
    fn polygon_examples() {
        let p = polygon(&bp(&[(4, 0, 1), (0, 3, -1)])).unwrap();
        assert_eq!(p.vertices, vec![(0, 3), (4, 0)]);
        assert_eq!((p.edges[0].p, p.edges[0].q, p.edges[0].c), (3, 4, 12));

        let f = two_cusps();
        assert_eq!(f, bp(&[(5, 0, 1), (3, 3, -1), (2, 2, -1), (0, 5, 1)]));
        let p = polygon(&f).unwrap();
        assert_eq!(p.vertices, vec![(0, 5), (2, 2), (5, 0)]);
        let e: Vec<_> = p.edges.iter().map(|e| (e.p, e.q, e.c)).collect();
        assert_eq!(e, vec![(3, 2, 10), (2, 3, 10)]);

        let p = polygon(&bp(&[(1, 1, 1)])).unwrap();
        assert_eq!(p.vertices, vec![(1, 1)]);
        assert!(p.edges.is_empty());

        assert_eq!(polygon(&bp(&[(0, 0, 1), (1, 0, 1)])), Err(Error::UnitAtOrigin));
    }

    #[test]
    fn nondegeneracy_examples() {
        let f = bp(&[(4, 0, 1), (0, 3, -1)]);
        assert!(nondegenerate(&f, &polygon(&f).unwrap()).unwrap());
        let f = two_cusps();
        assert!(nondegenerate(&f, &polygon(&f).unwrap()).unwrap());
        let f = bp(&[(2, 0, 1), (1, 1, 2), (0, 2, 1)]);
        assert!(!nondegenerate(&f, &polygon(&f).unwrap()).unwrap());
        assert_eq!(oracle_jumping_numbers(&f, &rat(1, 1)), Err(Error::Degenerate));
    }

    #[test]
    fn threshold_examples() {
        let cusp = polygon(&bp(&[(4, 0, 1), (0, 3, -1)])).unwrap();
        assert_eq!(monomial_threshold(&cusp, 0, 0), rat(7, 12));
        let p = polygon(&two_cusps()).unwrap();
        assert_eq!(monomial_threshold(&p, 0, 0), rat(1, 2));
        assert_eq!(monomial_threshold(&p, 2, 0), rat(9, 10));
    }

    #[test]
    fn oracle_examples() {
        let one = rat(1, 1);
        let cusp = bp(&[(4, 0, 1), (0, 3, -1)]);
        assert_eq!(oracle_jumping_numbers(&cusp, &one).unwrap(), vec![rat(7, 12), rat(5, 6), rat(11, 12)]);
        assert_eq!(oracle_jumping_numbers(&cusp, &rat(5, 6)).unwrap(), vec![rat(7, 12), rat(5, 6)]);
        assert_eq!(oracle_jumping_numbers(&two_cusps(), &one).unwrap(), vec![rat(1, 2), rat(7, 10), rat(9, 10)]);
        assert!(oracle_jumping_numbers(&bp(&[(1, 1, 1)]), &one).unwrap().is_empty());
    }

    proptest::proptest! {
        #[test]
        fn thresholds_are_monotone(p in 2u32..10, q in 2u32..10, a in 0u32..6, b in 0u32..6) {
            let poly = polygon(&bp(&[(p, 0, 1), (0, q, -1)])).unwrap();
            proptest::prop_assert!(monomial_threshold(&poly, a + 1, b) >= monomial_threshold(&poly, a, b));
            proptest::prop_assert!(monomial_threshold(&poly, a, b + 1) >= monomial_threshold(&poly, a, b));
        }

        #[test]
        fn quasi_homogeneous_closed_form(p in 2i64..10, q in 2i64..10) {
            proptest::prop_assume!(p.gcd(&q) == 1);
            let f = bp(&[(p as u32, 0, 1), (0, q as u32, -1)]);
            let mut expect = BTreeSet::new();
            for i in 1..=p {
                for j in 1..=q {
                    let l = rat(i, p) + rat(j, q);
                    if l < rat(1, 1) {
                        expect.insert(l);
                    }
                }
            }
            let got = oracle_jumping_numbers(&f, &rat(1, 1)).unwrap();
            proptest::prop_assert_eq!(got, expect.into_iter().collect::<Vec<_>>());
        }
    }
}
