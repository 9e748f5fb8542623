//! Sparse exact bivariate polynomials over a [`FieldTower`], univariate
//! parameter polynomials, and the local invariants built on them: orders,
//! weighted orders, gcds, resultants and intersection numbers at the origin.

mod gcd;
mod intersect;
mod univariate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::numfield::{upoly, FieldTower, Node, NumResult, Rational, TowerRef};

pub use intersect::{intersection_number, resultant_y};
pub use univariate::{Parameterization, Poly1};

/// Exponent pair `(i, j)` of `x^i y^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial2 {
    pub i: u32,
    pub j: u32,
}

impl Monomial2 {
    pub const fn new(i: u32, j: u32) -> Self {
        Monomial2 { i, j }
    }

    pub fn degree(self) -> u32 {
        self.i + self.j
    }
}

impl Serialize for Monomial2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.i, self.j].serialize(s)
    }
}

/// A nonnegative integer or `∞`, used for orders and intersection numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Order::Infinite
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Order::Finite(n) => s.serialize_u64(*n),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

impl std::ops::Add for Order {
    type Output = Order;
    fn add(self, rhs: Order) -> Order {
        match (self, rhs) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinite,
        }
    }
}

/// Polynomial in `x, y` with coefficients in a tower; zero coefficients are
/// never stored.
#[derive(Clone, Debug)]
pub struct Poly2 {
    tower: TowerRef,
    terms: BTreeMap<Monomial2, Node>,
}

impl PartialEq for Poly2 {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && *self.tower == *other.tower
    }
}

impl Eq for Poly2 {}

impl Poly2 {
    pub fn zero(tower: TowerRef) -> Self {
        Poly2 {
            tower,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(tower: TowerRef, c: Node) -> Self {
        Poly2::monomial(tower, Monomial2::new(0, 0), c)
    }

    pub fn one(tower: TowerRef) -> Self {
        Poly2::constant(tower, Node::one())
    }

    pub fn monomial(tower: TowerRef, m: Monomial2, c: Node) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly2 { tower, terms }
    }

    pub fn x(tower: TowerRef) -> Self {
        Poly2::monomial(tower, Monomial2::new(1, 0), Node::one())
    }

    pub fn y(tower: TowerRef) -> Self {
        Poly2::monomial(tower, Monomial2::new(0, 1), Node::one())
    }

    /// Builds from integer-coefficient terms `(i, j, c)`.
    pub fn from_int_terms(tower: TowerRef, terms: &[(u32, u32, i64)]) -> Self {
        let mut p = Poly2::zero(tower);
        for &(i, j, c) in terms {
            p.add_term(Monomial2::new(i, j), &Node::from_int(c));
        }
        p
    }

    pub fn from_terms(tower: TowerRef, terms: impl IntoIterator<Item = (Monomial2, Node)>) -> Self {
        let mut p = Poly2::zero(tower);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn tower(&self) -> &TowerRef {
        &self.tower
    }

    pub fn terms(&self) -> &BTreeMap<Monomial2, Node> {
        &self.terms
    }

    pub fn coeff(&self, i: u32, j: u32) -> Node {
        self.terms
            .get(&Monomial2::new(i, j))
            .cloned()
            .unwrap_or_else(Node::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> BTreeSet<Monomial2> {
        self.terms.keys().copied().collect()
    }

    /// Same coefficients viewed in `tower`, which must extend (or reduce
    /// compatibly from) the current one.
    pub fn with_tower(&self, tower: &TowerRef) -> Poly2 {
        let mut out = Poly2::zero(tower.clone());
        for (m, c) in &self.terms {
            out.add_term(*m, &tower.reduce(c));
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial2, c: &Node) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Node::zero);
        *entry = self.tower.add(entry, c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn check(&self, other: &Poly2) {
        debug_assert!(
            Arc::ptr_eq(&self.tower, &other.tower) || self.tower == other.tower,
            "polynomials over different towers"
        );
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        self.check(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn neg(&self) -> Poly2 {
        Poly2 {
            tower: self.tower.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, self.tower.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        self.check(other);
        let mut out = Poly2::zero(self.tower.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = self.tower.mul(c1, c2);
                out.add_term(Monomial2::new(m1.i + m2.i, m1.j + m2.j), &c);
            }
        }
        out
    }

    pub fn scale(&self, c: &Node) -> Poly2 {
        let mut out = Poly2::zero(self.tower.clone());
        for (m, a) in &self.terms {
            out.add_term(*m, &self.tower.mul(a, c));
        }
        out
    }

    pub fn scale_rat(&self, r: &Rational) -> Poly2 {
        self.scale(&Node::Rat(r.clone()))
    }

    pub fn mul_monomial(&self, di: u32, dj: u32) -> Poly2 {
        Poly2 {
            tower: self.tower.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial2::new(m.i + di, m.j + dj), c.clone()))
                .collect(),
        }
    }

    /// Exact division by `x^di y^dj`; `None` if some term is not divisible.
    pub fn div_monomial(&self, di: u32, dj: u32) -> Option<Poly2> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.i < di || m.j < dj {
                return None;
            }
            terms.insert(Monomial2::new(m.i - di, m.j - dj), c.clone());
        }
        Some(Poly2 {
            tower: self.tower.clone(),
            terms,
        })
    }

    pub fn pow(&self, e: u32) -> Poly2 {
        let mut acc = Poly2::one(self.tower.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn dx(&self) -> Poly2 {
        let mut out = Poly2::zero(self.tower.clone());
        for (m, c) in &self.terms {
            if m.i > 0 {
                let c = self.tower.mul(c, &Node::from_int(m.i as i64));
                out.add_term(Monomial2::new(m.i - 1, m.j), &c);
            }
        }
        out
    }

    pub fn dy(&self) -> Poly2 {
        let mut out = Poly2::zero(self.tower.clone());
        for (m, c) in &self.terms {
            if m.j > 0 {
                let c = self.tower.mul(c, &Node::from_int(m.j as i64));
                out.add_term(Monomial2::new(m.i, m.j - 1), &c);
            }
        }
        out
    }

    /// Value at the origin.
    pub fn constant_term(&self) -> Node {
        self.coeff(0, 0)
    }

    /// Total degree; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.j).max()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.i).max()
    }

    /// `min{i+j}` over the support.
    pub fn total_order(&self) -> Order {
        self.terms
            .keys()
            .map(|m| Order::Finite(m.degree() as u64))
            .min()
            .unwrap_or(Order::Infinite)
    }

    /// `min{(ip + jq)/gcd(p,q)}` over the support.
    pub fn weighted_order(&self, p: u32, q: u32) -> Order {
        assert!(p >= 1 && q >= 1, "weights must be positive");
        let d = p.gcd(&q) as u64;
        self.terms
            .keys()
            .map(|m| Order::Finite((m.i as u64 * p as u64 + m.j as u64 * q as u64) / d))
            .min()
            .unwrap_or(Order::Infinite)
    }

    /// Homogeneous part of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Poly2 {
        Poly2 {
            tower: self.tower.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// `f(x, 0)` as a dense polynomial in `x`.
    pub fn restrict_y0(&self) -> upoly::UPoly {
        let mut out = Vec::new();
        for (m, c) in self.terms.iter().filter(|(m, _)| m.j == 0) {
            if out.len() <= m.i as usize {
                out.resize(m.i as usize + 1, Node::zero());
            }
            out[m.i as usize] = c.clone();
        }
        upoly::trim(out)
    }

    /// `f(0, y)` as a dense polynomial in `y`.
    pub fn restrict_x0(&self) -> upoly::UPoly {
        let mut out = Vec::new();
        for (m, c) in self.terms.iter().filter(|(m, _)| m.i == 0) {
            if out.len() <= m.j as usize {
                out.resize(m.j as usize + 1, Node::zero());
            }
            out[m.j as usize] = c.clone();
        }
        upoly::trim(out)
    }

    /// Applies the monomial map `x^i y^j ↦ x^{i'} y^{j'}`.
    pub fn map_monomials(&self, f: impl Fn(u32, u32) -> (u32, u32)) -> Poly2 {
        let mut out = Poly2::zero(self.tower.clone());
        for (m, c) in &self.terms {
            let (i, j) = f(m.i, m.j);
            out.add_term(Monomial2::new(i, j), c);
        }
        out
    }

    /// `f(px, py)` for polynomials `px, py`.
    pub fn compose(&self, px: &Poly2, py: &Poly2) -> Poly2 {
        let max_i = self.degree_x().unwrap_or(0);
        let max_j = self.degree_y().unwrap_or(0);
        let xs = powers(px, max_i);
        let ys = powers(py, max_j);
        let mut out = Poly2::zero(self.tower.clone());
        for (m, c) in &self.terms {
            let t = xs[m.i as usize].mul(&ys[m.j as usize]).scale(c);
            out = out.add(&t);
        }
        out
    }

    /// `f(x, y + c)`.
    pub fn translate_y(&self, c: &Node) -> Poly2 {
        let shifted = Poly2::y(self.tower.clone()).add(&Poly2::constant(self.tower.clone(), c.clone()));
        self.compose(&Poly2::x(self.tower.clone()), &shifted)
    }

    /// `f(x + c, y)`.
    pub fn translate_x(&self, c: &Node) -> Poly2 {
        let shifted = Poly2::x(self.tower.clone()).add(&Poly2::constant(self.tower.clone(), c.clone()));
        self.compose(&shifted, &Poly2::y(self.tower.clone()))
    }

    /// `f(y, x)`.
    pub fn swap_xy(&self) -> Poly2 {
        self.map_monomials(|i, j| (j, i))
    }

    /// Canonical display order: total degree descending, then x-degree
    /// descending (graded lexicographic with x before y).
    pub fn sorted_terms(&self) -> Vec<(Monomial2, &Node)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (*m, c)).collect();
        v.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then(b.i.cmp(&a.i)));
        v
    }

    pub fn fmt_with(&self, xname: &str, yname: &str) -> String {
        let parts: Vec<(bool, String)> = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| {
                let mut factors = Vec::new();
                for (name, e) in [(xname, m.i), (yname, m.j)] {
                    match e {
                        0 => {}
                        1 => factors.push(name.to_string()),
                        _ => factors.push(format!("{name}^{e}")),
                    }
                }
                self.tower.fmt_coeff_times(c, &factors.join("*"))
            })
            .collect();
        crate::numfield::join_signed(&parts)
    }

    /// Exact quotient `self / g`, or `None` if `g` does not divide `self`.
    pub fn div_exact(&self, g: &Poly2) -> NumResult<Option<Poly2>> {
        gcd::div_exact(self, g)
    }

    /// Gcd normalized so its leading coefficient (highest y-degree, then
    /// highest x-degree) is 1. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly2) -> NumResult<Poly2> {
        gcd::gcd(self, other)
    }
}

fn powers(p: &Poly2, n: u32) -> Vec<Poly2> {
    let mut out = vec![Poly2::one(p.tower.clone())];
    for k in 1..=n as usize {
        let next = out[k - 1].mul(p);
        out.push(next);
    }
    out
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with("x", "y"))
    }
}

/// The tower of ℚ alone, shared.
pub fn rationals() -> TowerRef {
    Arc::new(FieldTower::rationals())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(terms: &[(u32, u32, i64)]) -> Poly2 {
        Poly2::from_int_terms(rationals(), terms)
    }

    #[test]
    fn orders() {
        // xy + y^2
        assert_eq!(q(&[(1, 1, 1), (0, 2, 1)]).total_order(), Order::Finite(2));
        assert_eq!(q(&[]).total_order(), Order::Infinite);
        assert_eq!(q(&[(0, 2, 1), (3, 0, -1)]).total_order(), Order::Finite(2));
        assert_eq!(q(&[(1, 1, 1)]).weighted_order(6, 3), Order::Finite(3));
        assert_eq!(q(&[(0, 0, 1)]).weighted_order(5, 7), Order::Finite(0));
        // y^3 + x^2 y at (2,3): min(9, 7)
        assert_eq!(q(&[(0, 3, 1), (2, 1, 1)]).weighted_order(2, 3), Order::Finite(7));
    }

    #[test]
    fn display_is_graded_lex() {
        assert_eq!(q(&[(0, 2, 1), (1, 1, 1)]).to_string(), "x*y + y^2");
        assert_eq!(q(&[(2, 0, -1)]).to_string(), "-x^2");
        assert_eq!(q(&[(0, 0, 3), (3, 0, -1), (0, 2, 1)]).to_string(), "-x^3 + y^2 + 3");
        assert_eq!(q(&[]).to_string(), "0");
    }

    #[test]
    fn compose_and_derivatives() {
        let f = q(&[(0, 2, 1), (3, 0, -1)]);
        assert_eq!(f.dx(), q(&[(2, 0, -3)]));
        assert_eq!(f.dy(), q(&[(0, 1, 2)]));
        // f(x, tx) = t^2 x^2 - x^3 (with y playing t)
        let g = f.map_monomials(|i, j| (i + j, j));
        assert_eq!(g, q(&[(2, 2, 1), (3, 0, -1)]));
        let h = q(&[(0, 1, 1)]).translate_y(&Node::from_int(2));
        assert_eq!(h, q(&[(0, 1, 1), (0, 0, 2)]));
    }

    #[test]
    fn gcd_and_division() {
        // gcd(xy + y^2, xy) = y
        let a = q(&[(1, 1, 1), (0, 2, 1)]);
        let b = q(&[(1, 1, 1)]);
        assert_eq!(a.gcd(&b).unwrap(), q(&[(0, 1, 1)]));
        let prod = a.mul(&q(&[(1, 0, 1), (0, 1, -2), (0, 0, 5)]));
        assert_eq!(prod.div_exact(&a).unwrap(), Some(q(&[(1, 0, 1), (0, 1, -2), (0, 0, 5)])));
        assert_eq!(b.div_exact(&a).unwrap(), None);
        // x^2 y, x^2 -> x^2
        assert_eq!(q(&[(2, 1, 1)]).gcd(&q(&[(2, 0, 1)])).unwrap(), q(&[(2, 0, 1)]));
        assert_eq!(q(&[(1, 0, 1)]).gcd(&q(&[(0, 1, 1)])).unwrap(), q(&[(0, 0, 1)]));
    }
}
