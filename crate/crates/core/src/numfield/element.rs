use std::fmt;
use std::sync::Arc;

use super::{FieldTower, Node, NumResult, Rational, TowerRef};

/// An element of a [`FieldTower`], carrying its tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicElement {
    tower: TowerRef,
    node: Node,
}

impl AlgebraicElement {
    pub fn new(tower: TowerRef, node: Node) -> Self {
        AlgebraicElement { tower, node }
    }

    pub fn rational(tower: TowerRef, r: Rational) -> Self {
        AlgebraicElement::new(tower, Node::Rat(r))
    }

    /// The generator of 1-based `level`.
    pub fn generator(tower: TowerRef, level: usize) -> Self {
        let node = tower.generator(level);
        AlgebraicElement::new(tower, node)
    }

    pub fn tower(&self) -> &TowerRef {
        &self.tower
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn into_node(self) -> Node {
        self.node
    }

    fn check(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.tower, &other.tower) || self.tower == other.tower,
            "elements from different towers"
        );
    }

    pub fn is_zero(&self) -> bool {
        self.node.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        AlgebraicElement::new(self.tower.clone(), self.tower.add(&self.node, &other.node))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        AlgebraicElement::new(self.tower.clone(), self.tower.sub(&self.node, &other.node))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        AlgebraicElement::new(self.tower.clone(), self.tower.mul(&self.node, &other.node))
    }

    pub fn neg(&self) -> Self {
        AlgebraicElement::new(self.tower.clone(), self.tower.neg(&self.node))
    }

    /// `self⁻¹`, or [`super::NumError::Split`] when `self` is a zero divisor
    /// of a reducible modulus.
    pub fn invert(&self) -> NumResult<Self> {
        Ok(AlgebraicElement::new(self.tower.clone(), self.tower.inv(&self.node)?))
    }

    /// `Some(r)` iff every non-constant coordinate vanishes.
    pub fn rational_value(&self) -> Option<Rational> {
        self.tower.rational_value(&self.node)
    }

    /// Membership in ℚ⁺; anything not rational is outside ℚ⁺.
    pub fn is_positive_rational(&self) -> bool {
        self.rational_value().is_some_and(|r| r > Rational::from_integer(0.into()))
    }
}

impl fmt::Display for AlgebraicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tower.fmt_node(&self.node))
    }
}

impl FieldTower {
    pub fn element(self: &Arc<Self>, node: Node) -> AlgebraicElement {
        AlgebraicElement::new(self.clone(), node)
    }
}
