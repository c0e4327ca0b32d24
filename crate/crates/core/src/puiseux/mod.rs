//! Polynomial frontend: from `f(x, y)` to analytic branches at the origin.
//!
//! Branches are separated by iterated point blowups. At each infinitely
//! near point the tangent cone of the strict transform is factored over the
//! current coefficient field; an irreducible factor of degree `d > 1` is a
//! set of `d` conjugate directions, explored once over a simple extension.
//! Keeping the exceptional divisors through the current point on the
//! coordinate axes gives the proximities, hence the multiplicity sequences
//! and characteristic exponents of the branches, and the number of points
//! any two branches share.

mod parse;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use parse::parse;

use crate::arith::{factor_over, BiPoly, Elem, Field, Rational, SimpleExtension, UniPoly};
use crate::branch::{CharExponents, MultiplicitySeq, Proximity, SeqEntry};
use crate::cluster::{build_diagram, BranchInput, Contacts, EnriquesDiagram};
use crate::error::{Error, Result};

/// A polynomial whose germ at the origin is a curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveInput {
    polynomial: BiPoly<Rational>,
}

impl CurveInput {
    pub fn new(polynomial: BiPoly<Rational>) -> Result<Self> {
        if polynomial.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !Field::is_zero(&polynomial.coeff(0, 0)) {
            return Err(Error::UnitAtOrigin);
        }
        Ok(Self { polynomial })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(parse(text)?)
    }

    pub fn polynomial(&self) -> &BiPoly<Rational> {
        &self.polynomial
    }
}

/// One analytic branch of the germ.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchResult {
    pub name: String,
    pub exponents: CharExponents,
    /// Multiplicity in `f` of the irreducible factor containing the branch.
    pub coefficient: u64,
    /// The squarefree part of `f` (all irreducible factors of the same
    /// multiplicity) containing the branch.
    pub factor: BiPoly<Rational>,
    /// Index of the conjugacy class.
    pub class: usize,
    /// Size of the conjugacy class.
    pub conjugates: usize,
    /// Shared infinitely near points with every other branch.
    pub contacts: BTreeMap<usize, usize>,
}

struct Node {
    parent: Option<usize>,
    /// Number of conjugate points this node stands for among its siblings.
    degree: usize,
    /// Second point this one is proximate to, if satellite.
    extra: Option<usize>,
    depth: usize,
    order: u64,
}

struct Task {
    node: usize,
    field: Option<Arc<SimpleExtension>>,
    /// Strict transforms of the squarefree parts through the point.
    transforms: Vec<(usize, BiPoly<Elem>)>,
    /// Exceptional divisor `{x = 0}`, if it is one.
    x_div: Option<usize>,
    /// Exceptional divisor `{y = 0}`, if it is one.
    y_div: Option<usize>,
}

struct Tree {
    nodes: Vec<Node>,
    /// `(leaf, factor)` per conjugacy class.
    leaves: Vec<(usize, usize)>,
}

impl Tree {
    fn path(&self, mut n: usize) -> Vec<usize> {
        let mut out = vec![n];
        while let Some(p) = self.nodes[n].parent {
            out.push(p);
            n = p;
        }
        out.reverse();
        out
    }
}

/// Tangent cone `H(1, c)` of a form of degree `m` and the multiplicity of
/// the vertical direction.
fn tangent(p: &BiPoly<Elem>, m: u32) -> (UniPoly<Elem>, u32) {
    let h = UniPoly::new(p.homogeneous_part(m));
    let vertical = m - h.deg() as u32;
    (h, vertical)
}

fn explore(factors: &[BiPoly<Rational>], depth_limit: usize) -> Result<Tree> {
    let mut tree = Tree {
        nodes: Vec::new(),
        leaves: Vec::new(),
    };
    let root = Task {
        node: 0,
        field: None,
        transforms: factors
            .iter()
            .enumerate()
            .map(|(i, f)| (i, f.map(|c| Elem::Rat(c.clone()))))
            .collect(),
        x_div: None,
        y_div: None,
    };
    tree.nodes.push(Node {
        parent: None,
        degree: 1,
        extra: None,
        depth: 0,
        order: 0,
    });
    let mut stack = vec![root];
    while let Some(task) = stack.pop() {
        let orders: Vec<u32> = task
            .transforms
            .iter()
            .map(|(_, p)| p.order().expect("transform vanishes at the point"))
            .collect();
        let m: u32 = orders.iter().sum();
        tree.nodes[task.node].order = m as u64;
        let mut cone = UniPoly::constant(Elem::one());
        let mut vertical = 0;
        for ((_, p), &mi) in task.transforms.iter().zip(&orders) {
            let (h, v) = tangent(p, mi);
            cone = cone.mul(&h);
            vertical += v;
        }
        if m == 1 {
            let along = if vertical == 1 {
                task.x_div.is_some()
            } else {
                task.y_div.is_some() && cone.coeff(0).is_zero()
            };
            if !along {
                tree.leaves.push((task.node, task.transforms[0].0));
                continue;
            }
        }
        let depth = tree.nodes[task.node].depth + 1;
        let child = |tree: &mut Tree, degree, extra| {
            tree.nodes.push(Node {
                parent: Some(task.node),
                degree,
                extra,
                depth,
                order: 0,
            });
            tree.nodes.len() - 1
        };
        let keep = |ts: Vec<(usize, BiPoly<Elem>)>| -> Vec<(usize, BiPoly<Elem>)> {
            ts.into_iter().filter(|(_, p)| p.coeff(0, 0).is_zero()).collect()
        };
        if vertical > 0 {
            let node = child(&mut tree, 1, task.x_div);
            stack.push(Task {
                node,
                field: task.field.clone(),
                transforms: keep(task.transforms.iter().map(|(i, p)| (*i, p.blowup_vertical())).collect()),
                x_div: task.x_div,
                y_div: Some(task.node),
            });
        }
        if cone.deg() == 0 {
            continue;
        }
        let mut directions: Vec<UniPoly<Elem>> = Vec::new();
        for g in factor_over(&cone, task.field.as_ref())? {
            if !directions.contains(&g) {
                directions.push(g);
            }
        }
        for g in directions {
            let (c, field, degree) = if g.deg() == 1 {
                (g.coeff(0).negated(), task.field.clone(), 1)
            } else {
                let ext = SimpleExtension::new(task.field.clone(), g.clone(), depth_limit)?;
                (ext.generator(), Some(ext), g.deg())
            };
            let on_y = c.is_zero();
            let extra = if on_y { task.y_div } else { None };
            let node = child(&mut tree, degree, extra);
            stack.push(Task {
                node,
                field,
                transforms: keep(task.transforms.iter().map(|(i, p)| (*i, p.blowup_affine(&c))).collect()),
                x_div: Some(task.node),
                y_div: extra,
            });
        }
    }
    Ok(tree)
}

/// Multiplicities along a branch path from the proximity equalities,
/// starting from 1 at the leaf.
fn branch_multiplicities(tree: &Tree, path: &[usize]) -> Vec<u64> {
    let mut e = vec![0u64; path.len()];
    let last = path.len() - 1;
    e[last] = 1;
    for i in (0..last).rev() {
        e[i] = (i + 1..path.len())
            .filter(|&j| j == i + 1 || tree.nodes[path[j]].extra == Some(path[i]))
            .map(|j| e[j])
            .sum();
    }
    e
}

/// Analytic branches of `f` at the origin.
pub fn puiseux_branches(f: &BiPoly<Rational>, depth_limit: usize) -> Result<Vec<BranchResult>> {
    let input = CurveInput::new(f.clone())?;
    let parts = input.polynomial.squarefree_decomposition(true)?;
    let factors: Vec<BiPoly<Rational>> = parts.iter().map(|s| s.factor.clone()).collect();
    let tree = explore(&factors, depth_limit)?;

    struct Class {
        path: Vec<usize>,
        mults: Vec<u64>,
        factor: usize,
        exponents: CharExponents,
    }
    let mut classes = Vec::new();
    for &(leaf, factor) in &tree.leaves {
        let path = tree.path(leaf);
        let mults = branch_multiplicities(&tree, &path);
        let entries = path
            .iter()
            .zip(&mults)
            .map(|(&n, &multiplicity)| SeqEntry {
                multiplicity,
                kind: match tree.nodes[n].extra {
                    Some(t) => Proximity::Satellite(tree.nodes[t].depth),
                    None => Proximity::Free,
                },
            })
            .collect();
        let exponents = MultiplicitySeq::from_entries(entries)?.to_char_exponents()?;
        classes.push(Class {
            path,
            mults,
            factor,
            exponents,
        });
    }
    classes.sort_by(|a, b| (a.factor, &a.path).cmp(&(b.factor, &b.path)));

    // every point carries the multiplicities of the branches through it
    let mut through = vec![0u64; tree.nodes.len()];
    for c in &classes {
        let mut copies = 1u64;
        for (i, &n) in c.path.iter().enumerate().rev() {
            through[n] += copies * c.mults[i];
            copies *= tree.nodes[n].degree as u64;
        }
    }
    for (n, node) in tree.nodes.iter().enumerate() {
        if through[n] != node.order {
            return Err(Error::Invariant(format!(
                "point {n} has multiplicity {} but its branches account for {}",
                node.order, through[n]
            )));
        }
    }

    // expand classes into individual branches, labelled by the conjugate
    // chosen at each split along the path
    let mut copies: Vec<(usize, Vec<usize>)> = Vec::new();
    for (k, c) in classes.iter().enumerate() {
        let mut labels = vec![Vec::new()];
        for &n in &c.path {
            let d = tree.nodes[n].degree;
            labels = labels
                .into_iter()
                .flat_map(|l| {
                    (0..d).map(move |i| {
                        let mut l = l.clone();
                        l.push(i);
                        l
                    })
                })
                .collect();
        }
        copies.extend(labels.into_iter().map(|l| (k, l)));
    }
    let shared = |a: &(usize, Vec<usize>), b: &(usize, Vec<usize>)| {
        let (pa, pb) = (&classes[a.0].path, &classes[b.0].path);
        (0..pa.len().min(pb.len()))
            .take_while(|&i| pa[i] == pb[i] && a.1[i] == b.1[i])
            .count()
    };

    let mut per_factor = vec![0usize; factors.len()];
    for (k, _) in &copies {
        per_factor[classes[*k].factor] += 1;
    }
    let mut seen = vec![0usize; factors.len()];
    let mut out = Vec::new();
    for (i, a) in copies.iter().enumerate() {
        let class = &classes[a.0];
        let fi = class.factor;
        let text = factors[fi].display_with("x", "y");
        let name = if per_factor[fi] > 1 {
            seen[fi] += 1;
            format!("{text}#{}", seen[fi])
        } else {
            text
        };
        let contacts = copies
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(j, b)| (j, shared(a, b)))
            .collect();
        out.push(BranchResult {
            name,
            exponents: class.exponents.clone(),
            coefficient: parts[fi].multiplicity as u64,
            factor: factors[fi].clone(),
            class: a.0,
            conjugates: copies.iter().filter(|b| b.0 == a.0).count(),
            contacts,
        });
    }

    let order = input.polynomial.order().unwrap_or(0) as u64;
    let total: u64 = out.iter().map(|b| b.coefficient * b.exponents.multiplicity()).sum();
    if total != order {
        return Err(Error::Invariant(format!(
            "branches account for multiplicity {total}, the polynomial has order {order}"
        )));
    }
    Ok(out)
}

/// Enriques diagram of the minimal resolution of the branches.
pub fn to_diagram(branches: &[BranchResult]) -> Result<EnriquesDiagram> {
    let inputs: Vec<BranchInput> = branches
        .iter()
        .map(|b| BranchInput::new(b.name.clone(), b.exponents.clone(), b.coefficient))
        .collect();
    let mut contacts = Contacts::new();
    for (i, b) in branches.iter().enumerate() {
        for (&j, &s) in &b.contacts {
            if i < j {
                contacts.set(i, j, s);
            }
        }
    }
    build_diagram(&inputs, &contacts)
}
