//! Feynman graphs and their Symanzik polynomials.
//!
//! `U` is the sum over spanning trees of the product of edge variables
//! *not* in the tree; `F` is the sum over spanning two-forests, each
//! weighted with minus the kinematic symbol of the separated leg set.
//! Enumeration is brute force over edge subsets with a union-find
//! connectivity check — intended for graphs with at most a dozen edges.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{LaurentPolynomial, LaurentRat};
use crate::error::{Error, Result};

/// A connected graph with indexed internal edges and external legs
/// carrying kinematic symbols.
#[derive(Debug, Clone)]
pub struct Graph {
    pub vertices: usize,
    /// (v, w) pairs; edge k carries variable x_{k+1}
    pub internal_edges: Vec<(usize, usize)>,
    /// (vertex, kinematic symbol)
    pub external_legs: Vec<(usize, String)>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

impl Graph {
    pub fn triangle() -> Graph {
        // vertices 0,1,2; edge k connects the two vertices *not* carrying
        // leg t_{k+1}, matching the usual one-loop labeling
        Graph {
            vertices: 3,
            internal_edges: vec![(1, 2), (0, 2), (0, 1)],
            external_legs: vec![(0, "t1".into()), (1, "t2".into()), (2, "t3".into())],
        }
    }

    pub fn n_edges(&self) -> usize {
        self.internal_edges.len()
    }

    fn is_connected(&self) -> bool {
        if self.vertices == 0 {
            return false;
        }
        let mut uf = UnionFind::new(self.vertices);
        let mut comps = self.vertices;
        for &(a, b) in &self.internal_edges {
            if uf.union(a, b) {
                comps -= 1;
            }
        }
        comps == 1
    }

    /// Component count and labels of an edge subset.
    fn components(&self, subset: &[usize]) -> (usize, Vec<usize>) {
        let mut uf = UnionFind::new(self.vertices);
        let mut comps = self.vertices;
        for &e in subset {
            let (a, b) = self.internal_edges[e];
            if uf.union(a, b) {
                comps -= 1;
            }
        }
        let labels = (0..self.vertices).map(|v| uf.find(v)).collect();
        (comps, labels)
    }
}

/// A linear combination of kinematic symbols with a rational constant
/// part, used as the coefficient domain of `F`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KinCoeff {
    pub constant: BigRational,
    pub atoms: BTreeMap<String, BigRational>,
}

impl KinCoeff {
    pub fn constant_value(c: BigRational) -> Self {
        KinCoeff { constant: c, atoms: BTreeMap::new() }
    }

    pub fn atom(name: &str, c: BigRational) -> Self {
        let mut atoms = BTreeMap::new();
        if !c.is_zero() {
            atoms.insert(name.to_string(), c);
        }
        KinCoeff { constant: BigRational::zero(), atoms }
    }

    fn prune(mut self) -> Self {
        self.atoms.retain(|_, v| !v.is_zero());
        self
    }

    /// Substitute numeric values for every atom.
    pub fn substitute(&self, values: &BTreeMap<String, BigRational>) -> Result<BigRational> {
        let mut acc = self.constant.clone();
        for (name, c) in &self.atoms {
            let v = values
                .get(name)
                .ok_or_else(|| Error::InvalidSpec(format!("no value for kinematic symbol {name}")))?;
            acc += c.clone() * v.clone();
        }
        Ok(acc)
    }

    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        if !self.constant.is_zero() {
            parts.push(super::fmt_rat(&self.constant));
        }
        for (name, c) in &self.atoms {
            if c.is_one() {
                parts.push(name.clone());
            } else if (-c.clone()).is_one() {
                parts.push(format!("-{name}"));
            } else {
                parts.push(format!("{}*{}", super::fmt_rat(c), name));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}

impl Zero for KinCoeff {
    fn zero() -> Self {
        KinCoeff::default()
    }
    fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.atoms.values().all(|v| v.is_zero())
    }
}

impl std::ops::Add for KinCoeff {
    type Output = KinCoeff;
    fn add(mut self, rhs: KinCoeff) -> KinCoeff {
        self.constant += rhs.constant;
        for (name, c) in rhs.atoms {
            *self.atoms.entry(name).or_insert_with(BigRational::zero) += c;
        }
        self.prune()
    }
}

impl std::ops::Neg for KinCoeff {
    type Output = KinCoeff;
    fn neg(self) -> KinCoeff {
        KinCoeff {
            constant: -self.constant,
            atoms: self.atoms.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

impl std::ops::Mul for KinCoeff {
    type Output = KinCoeff;
    fn mul(self, rhs: KinCoeff) -> KinCoeff {
        // products of two atom-bearing coefficients do not arise here
        if self.atoms.is_empty() {
            let mut out = KinCoeff::constant_value(self.constant.clone() * rhs.constant);
            for (name, c) in rhs.atoms {
                out.atoms.insert(name, c * self.constant.clone());
            }
            out.prune()
        } else if rhs.atoms.is_empty() {
            rhs * self
        } else {
            panic!("kinematic coefficients are linear in the symbols");
        }
    }
}

/// Polynomial in the edge variables with kinematic-symbol coefficients.
pub type KinPolynomial = LaurentPolynomial<KinCoeff>;

impl KinPolynomial {
    /// Substitute numeric kinematic values, yielding an exact polynomial.
    pub fn substitute_kinematics(
        &self,
        values: &BTreeMap<String, BigRational>,
    ) -> Result<LaurentRat> {
        let mut out = LaurentRat::zero(self.nvars());
        for (e, c) in self.terms() {
            out.add_term(&e.0, c.substitute(values)?);
        }
        Ok(out)
    }

    pub fn to_text_kin(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms() {
            let mono = super::fmt_monomial(vars, &e.0);
            if mono.is_empty() {
                parts.push(format!("({})", c.to_text()));
            } else {
                parts.push(format!("({})*{}", c.to_text(), mono));
            }
        }
        parts.join(" + ")
    }
}

/// First and second Symanzik polynomials of a connected graph.
///
/// The two-forest weight follows the triangle convention: minus the sum
/// of the kinematic symbols on the side with fewer legs (ties broken
/// toward the side containing the smallest leg index).
pub fn symanzik(g: &Graph) -> Result<(LaurentRat, KinPolynomial)> {
    if !g.is_connected() {
        return Err(Error::Precondition("graph must be connected".into()));
    }
    let n = g.n_edges();
    if n > 20 {
        return Err(Error::Precondition(format!(
            "brute-force spanning enumeration is limited to 20 edges, got {n}"
        )));
    }

    let mut u_poly = LaurentRat::zero(n);
    let mut f_poly = KinPolynomial::zero(n);

    // iterate over all edge subsets; a subset is a spanning tree when it
    // has |V|-1 edges and one component, a two-forest when it has |V|-2
    // edges and two components (acyclicity follows from the counts)
    for mask in 0u64..(1u64 << n) {
        let subset: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
        let (comps, labels) = g.components(&subset);
        let complement_exp: Vec<i64> =
            (0..n).map(|k| if mask >> k & 1 == 1 { 0 } else { 1 }).collect();

        if subset.len() == g.vertices - 1 && comps == 1 {
            u_poly.add_term(&complement_exp, BigRational::one());
        } else if g.vertices >= 2 && subset.len() == g.vertices - 2 && comps == 2 {
            let weight = two_forest_weight(g, &labels)?;
            f_poly.add_term(&complement_exp, -weight);
        }
    }
    Ok((u_poly, f_poly))
}

fn two_forest_weight(g: &Graph, labels: &[usize]) -> Result<KinCoeff> {
    // split the legs by component
    let root0 = labels[g.external_legs.first().map(|&(v, _)| v).unwrap_or(0)];
    let mut side_a: Vec<&String> = Vec::new();
    let mut side_b: Vec<&String> = Vec::new();
    let mut idx_a = usize::MAX;
    let mut idx_b = usize::MAX;
    for (i, (v, name)) in g.external_legs.iter().enumerate() {
        if labels[*v] == root0 {
            side_a.push(name);
            idx_a = idx_a.min(i);
        } else {
            side_b.push(name);
            idx_b = idx_b.min(i);
        }
    }
    let chosen = match side_a.len().cmp(&side_b.len()) {
        std::cmp::Ordering::Less => side_a,
        std::cmp::Ordering::Greater => side_b,
        std::cmp::Ordering::Equal => {
            if idx_a <= idx_b {
                side_a
            } else {
                side_b
            }
        }
    };
    if chosen.is_empty() {
        return Err(Error::Degenerate(
            "two-forest separates no external legs; massless tadpole-like graph".into(),
        ));
    }
    let mut acc = KinCoeff::zero();
    for name in chosen {
        acc = acc + KinCoeff::atom(name, BigRational::one());
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn triangle_symanzik_matches_known_form() {
        let g = Graph::triangle();
        let (u, f) = symanzik(&g).unwrap();
        // U = x1 + x2 + x3
        let expected_u = LaurentRat::from_terms(
            3,
            [(vec![1, 0, 0], rat(1)), (vec![0, 1, 0], rat(1)), (vec![0, 0, 1], rat(1))],
        );
        assert_eq!(u, expected_u);
        // F = -t1*x2*x3 - t2*x1*x3 - t3*x1*x2
        assert_eq!(f.num_terms(), 3);
        assert_eq!(f.coeff(&[0, 1, 1]).unwrap(), &KinCoeff::atom("t1", rat(-1)));
        assert_eq!(f.coeff(&[1, 0, 1]).unwrap(), &KinCoeff::atom("t2", rat(-1)));
        assert_eq!(f.coeff(&[1, 1, 0]).unwrap(), &KinCoeff::atom("t3", rat(-1)));
    }

    #[test]
    fn single_edge_graph() {
        // oracle: exhaustive enumeration by hand — the only spanning tree
        // is the edge itself (empty complement, U = 1); the only two-forest
        // is the empty set, separating leg t1 from t2 (F = -t1*x1)
        let g = Graph {
            vertices: 2,
            internal_edges: vec![(0, 1)],
            external_legs: vec![(0, "t1".into()), (1, "t2".into())],
        };
        let (u, f) = symanzik(&g).unwrap();
        assert_eq!(u, LaurentRat::constant(1, rat(1)));
        assert_eq!(f.num_terms(), 1);
        assert_eq!(f.coeff(&[1]).unwrap(), &KinCoeff::atom("t1", rat(-1)));
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let g = Graph {
            vertices: 4,
            internal_edges: vec![(0, 1), (2, 3)],
            external_legs: vec![],
        };
        assert!(symanzik(&g).is_err());
    }

    #[test]
    fn triangle_homogeneity_degrees() {
        // loops = 1: U homogeneous of degree 1, F of degree 2
        let g = Graph::triangle();
        let (u, f) = symanzik(&g).unwrap();
        assert!(u.terms().all(|(e, _)| e.total_degree() == 1));
        assert!(f.terms().all(|(e, _)| e.total_degree() == 2));
    }

    #[test]
    fn kinematic_substitution() {
        let g = Graph::triangle();
        let (_, f) = symanzik(&g).unwrap();
        let values: BTreeMap<String, BigRational> =
            [("t1", -1), ("t2", -1), ("t3", -1)]
                .into_iter()
                .map(|(k, v)| (k.to_string(), rat(v)))
                .collect();
        let fr = f.substitute_kinematics(&values).unwrap();
        assert!(fr.all_coeffs_positive());
        assert_eq!(fr.coeff(&[0, 1, 1]).unwrap(), &rat(1));
    }
}
