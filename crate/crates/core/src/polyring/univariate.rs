use std::fmt;

use crate::numfield::upoly::{self, UPoly};
use crate::numfield::{Node, NumResult, TowerRef};

use super::{Order, Poly2};

/// Polynomial in the parameter `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly1 {
    tower: TowerRef,
    coeffs: UPoly,
}

impl Poly1 {
    pub fn new(tower: TowerRef, coeffs: UPoly) -> Self {
        Poly1 {
            tower,
            coeffs: upoly::trim(coeffs),
        }
    }

    pub fn zero(tower: TowerRef) -> Self {
        Poly1::new(tower, Vec::new())
    }

    /// `c·t^k`.
    pub fn monomial(tower: TowerRef, k: u32, c: Node) -> Self {
        let mut coeffs = vec![Node::zero(); k as usize];
        coeffs.push(c);
        Poly1::new(tower, coeffs)
    }

    pub fn from_ints(tower: TowerRef, coeffs: &[i64]) -> Self {
        Poly1::new(tower, coeffs.iter().map(|&c| Node::from_int(c)).collect())
    }

    pub fn tower(&self) -> &TowerRef {
        &self.tower
    }

    pub fn coeffs(&self) -> &[Node] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Poly1) -> Poly1 {
        Poly1::new(self.tower.clone(), upoly::add(&self.tower, &self.coeffs, &other.coeffs))
    }

    pub fn sub(&self, other: &Poly1) -> Poly1 {
        Poly1::new(self.tower.clone(), upoly::sub(&self.tower, &self.coeffs, &other.coeffs))
    }

    pub fn mul(&self, other: &Poly1) -> Poly1 {
        Poly1::new(self.tower.clone(), upoly::mul(&self.tower, &self.coeffs, &other.coeffs))
    }

    pub fn derivative(&self) -> Poly1 {
        Poly1::new(self.tower.clone(), upoly::derivative(&self.tower, &self.coeffs))
    }

    /// Index of the first canonically nonzero coefficient.
    pub fn ord(&self) -> Order {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => Order::Finite(k as u64),
            None => Order::Infinite,
        }
    }

    /// Order with every skipped coefficient confirmed zero at all points of
    /// the tower.
    pub fn ord_dyn(&self) -> NumResult<Order> {
        for (k, c) in self.coeffs.iter().enumerate() {
            if !self.tower.is_zero_dyn(c)? {
                return Ok(Order::Finite(k as u64));
            }
        }
        Ok(Order::Infinite)
    }

    /// Drops every term of degree `≥ n`.
    pub fn truncate(&self, n: usize) -> Poly1 {
        Poly1::new(self.tower.clone(), self.coeffs.iter().take(n).cloned().collect())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval_zero(&self) -> Node {
        self.coeffs.first().cloned().unwrap_or_else(Node::zero)
    }

    pub fn fmt_var(&self, var: &str) -> String {
        upoly::fmt(&self.tower, &self.coeffs, var)
    }
}

impl fmt::Display for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

/// A polynomial arc `γ(t) = (x(t), y(t))` through the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parameterization {
    pub x: Poly1,
    pub y: Poly1,
}

impl Parameterization {
    /// Checks `γ(0) = 0` and that `γ` is not constant.
    pub fn new(x: Poly1, y: Poly1) -> Option<Self> {
        if !x.eval_zero().is_zero() || !y.eval_zero().is_zero() {
            return None;
        }
        if x.is_zero() && y.is_zero() {
            return None;
        }
        Some(Parameterization { x, y })
    }

    pub fn tower(&self) -> &TowerRef {
        self.x.tower()
    }

    /// Same arc over a larger tower.
    pub fn with_tower(&self, tower: &TowerRef) -> Self {
        let lift = |p: &Poly1| {
            Poly1::new(tower.clone(), p.coeffs().iter().map(|c| tower.reduce(c)).collect())
        };
        Parameterization {
            x: lift(&self.x),
            y: lift(&self.y),
        }
    }
}

impl fmt::Display for Parameterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `f(x(t), y(t))`.
pub fn substitute(f: &Poly2, gamma: &Parameterization) -> Poly1 {
    substitute_mod(f, gamma, usize::MAX)
}

/// `f(x(t), y(t)) mod t^n`.
pub fn substitute_mod(f: &Poly2, gamma: &Parameterization, n: usize) -> Poly1 {
    let t = f.tower().clone();
    let mul = |a: &[Node], b: &[Node]| -> UPoly {
        let mut p = upoly::mul(&t, a, b);
        p.truncate(n);
        p
    };
    let max_i = f.degree_x().unwrap_or(0) as usize;
    let max_j = f.degree_y().unwrap_or(0) as usize;
    let mut xs = vec![vec![Node::one()]];
    for k in 1..=max_i {
        xs.push(mul(&xs[k - 1], gamma.x.coeffs()));
    }
    let mut ys = vec![vec![Node::one()]];
    for k in 1..=max_j {
        ys.push(mul(&ys[k - 1], gamma.y.coeffs()));
    }
    let mut acc: UPoly = Vec::new();
    for (m, c) in f.terms() {
        let term = mul(&xs[m.i as usize], &ys[m.j as usize]);
        acc = upoly::add(&t, &acc, &upoly::scale(&t, &term, c));
    }
    Poly1::new(t, acc)
}

impl Poly2 {
    /// Exact polynomial `f(γ(t))`.
    pub fn substitute(&self, gamma: &Parameterization) -> Poly1 {
        substitute(self, gamma)
    }

    pub fn substitute_mod(&self, gamma: &Parameterization, n: usize) -> Poly1 {
        substitute_mod(self, gamma, n)
    }
}
