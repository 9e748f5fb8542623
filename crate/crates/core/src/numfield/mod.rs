//! Exact coefficient arithmetic over ℚ and towers of simple algebraic
//! extensions.
//!
//! A [`FieldTower`] is a list of generators `α_1, …, α_n`, each defined by a
//! monic squarefree modulus whose coefficients live in the previous level.
//! Moduli are *not* required to be irreducible: arithmetic follows the
//! dynamic-evaluation discipline, so an inversion that hits a zero divisor
//! reports a [`SplitEvent`] carrying a nontrivial factorization of the
//! offending modulus. Callers fork the computation per factor with
//! [`FieldTower::specialize`].
//!
//! Elements are stored as [`Node`] trees: a node at level `k` is a dense
//! polynomial in `α_k` of degree below `deg m_k`, whose coefficients are
//! nodes of lower level. The representation is canonical (fully reduced,
//! trailing zeros trimmed, degree-0 polynomials collapsed), so structural
//! equality is ring equality and elements of a lower level embed unchanged.

mod element;
mod qpoly;
pub mod upoly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use element::AlgebraicElement;
pub use qpoly::{cyclotomic, rational_roots};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Shared handle to a tower; polynomials and elements hold one of these.
pub type TowerRef = Arc<FieldTower>;

/// Builds a rational from an integer numerator and denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds an integral rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical element representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Rat(Rational),
    /// `Ext(k, c)` is `Σ c[i]·α_k^i`; `2 ≤ c.len() ≤ deg m_k`, last entry nonzero,
    /// every `c[i]` of level `< k`.
    Ext(usize, Vec<Node>),
}

impl Node {
    pub fn zero() -> Node {
        Node::Rat(Rational::zero())
    }

    pub fn one() -> Node {
        Node::Rat(Rational::one())
    }

    pub fn from_int(n: i64) -> Node {
        Node::Rat(int(n))
    }

    /// Canonical zero test. In a tower with a reducible modulus a nonzero
    /// node may still be a zero divisor; decisions use
    /// [`FieldTower::is_zero_dyn`].
    pub fn is_zero(&self) -> bool {
        matches!(self, Node::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Node::Rat(r) if r.is_one())
    }

    pub fn level(&self) -> usize {
        match self {
            Node::Rat(_) => 0,
            Node::Ext(k, _) => *k,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Node::Rat(r) => Some(r),
            Node::Ext(..) => None,
        }
    }
}

impl From<Rational> for Node {
    fn from(r: Rational) -> Self {
        Node::Rat(r)
    }
}

/// Nontrivial factorization of the modulus at `level`, discovered while
/// inverting a zero divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitEvent {
    /// 1-based generator level whose modulus factors.
    pub level: usize,
    /// Two monic factors (coefficients low to high, of level `< level`);
    /// their product is the modulus.
    pub factors: [Vec<Node>; 2],
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus of level {} splits", .0.level)]
    Split(SplitEvent),
    #[error("modulus is not squarefree over the current tower")]
    NotSquarefree,
    #[error("generator name `{0}` already in use")]
    NameClash(String),
    #[error("modulus must be monic")]
    NotMonic,
    #[error("modulus must have degree at least 2")]
    DegreeTooSmall,
}

pub type NumResult<T> = Result<T, NumError>;

/// One adjoined generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub name: String,
    /// Monic, coefficients low to high, entries of lower level.
    pub modulus: Vec<Node>,
    /// Decimal approximation, display only.
    pub hint: Option<String>,
}

impl Level {
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

/// ℚ followed by an ordered list of simple extensions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FieldTower {
    levels: Vec<Level>,
}

impl FieldTower {
    /// The tower consisting of ℚ alone.
    pub fn rationals() -> FieldTower {
        FieldTower::default()
    }

    /// Number of adjoined generators; level 0 is ℚ.
    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// The generator at 1-based `level`.
    pub fn level(&self, level: usize) -> &Level {
        &self.levels[level - 1]
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.levels.iter().position(|l| l.name == name).map(|i| i + 1)
    }

    /// Degree of the tower over ℚ.
    pub fn absolute_degree(&self) -> usize {
        self.levels.iter().map(Level::degree).product()
    }

    /// Canonical node for the generator of `level` (reduced, so a degree-one
    /// level yields an element of the level below).
    pub fn generator(&self, level: usize) -> Node {
        self.reduce_poly_node(level, vec![Node::zero(), Node::one()])
    }

    /// Adjoins a root of `modulus` (monic, degree ≥ 2, squarefree over the
    /// current tower).
    pub fn extend(
        &self,
        modulus: Vec<Node>,
        name: &str,
        hint: Option<String>,
    ) -> NumResult<FieldTower> {
        if self.find(name).is_some() {
            return Err(NumError::NameClash(name.to_string()));
        }
        let modulus = upoly::trim(modulus);
        if modulus.len() < 3 {
            return Err(NumError::DegreeTooSmall);
        }
        if !modulus.last().is_some_and(Node::is_one) {
            return Err(NumError::NotMonic);
        }
        let g = upoly::gcd(self, &modulus, &upoly::derivative(self, &modulus))?;
        if g.len() > 1 {
            return Err(NumError::NotSquarefree);
        }
        Ok(self.push_unchecked(modulus, name, hint))
    }

    /// Adjoins without the squarefree check; used for moduli that are
    /// squarefree by construction.
    pub(crate) fn push_unchecked(
        &self,
        modulus: Vec<Node>,
        name: &str,
        hint: Option<String>,
    ) -> FieldTower {
        let mut levels = self.levels.clone();
        levels.push(Level {
            name: name.to_string(),
            modulus,
            hint,
        });
        FieldTower { levels }
    }

    /// The tower with levels above `height` dropped.
    pub fn truncate(&self, height: usize) -> FieldTower {
        FieldTower {
            levels: self.levels[..height].to_vec(),
        }
    }

    /// Replaces the modulus at `level` by `factor` (a monic divisor of it).
    /// Higher levels keep their names; their moduli are reduced into the
    /// new tower. Use [`FieldTower::reduce`] to carry elements across.
    pub fn specialize(&self, level: usize, factor: &[Node]) -> FieldTower {
        let mut out = FieldTower {
            levels: self.levels[..level - 1].to_vec(),
        };
        let base = self.level(level);
        out.levels.push(Level {
            name: base.name.clone(),
            modulus: factor.to_vec(),
            hint: None,
        });
        for upper in &self.levels[level..] {
            let modulus = upper.modulus.iter().map(|c| out.reduce(c)).collect();
            out.levels.push(Level {
                name: upper.name.clone(),
                modulus,
                hint: upper.hint.clone(),
            });
        }
        out
    }

    /// Re-reduces a node built in a tower whose moduli are multiples of
    /// this tower's moduli (the image under the canonical projection).
    pub fn reduce(&self, node: &Node) -> Node {
        match node {
            Node::Rat(_) => node.clone(),
            Node::Ext(k, cs) => {
                let cs = cs.iter().map(|c| self.reduce(c)).collect();
                self.reduce_poly_node(*k, cs)
            }
        }
    }

    /// Reduces `Σ cs[i]·α_k^i` modulo `m_k` and normalizes.
    pub(crate) fn reduce_poly_node(&self, k: usize, mut cs: Vec<Node>) -> Node {
        let m = &self.level(k).modulus;
        let d = m.len() - 1;
        while cs.len() > d {
            let top = cs.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = cs.len() - d;
            for (j, mj) in m[..d].iter().enumerate() {
                let t = self.mul(&top, mj);
                cs[shift + j] = self.sub(&cs[shift + j], &t);
            }
        }
        normalize(k, cs)
    }

    pub fn add(&self, a: &Node, b: &Node) -> Node {
        match (a, b) {
            (Node::Rat(x), Node::Rat(y)) => Node::Rat(x + y),
            (Node::Ext(k, xs), Node::Ext(l, ys)) if k == l => {
                let n = xs.len().max(ys.len());
                let zero = Node::zero();
                let cs = (0..n)
                    .map(|i| self.add(xs.get(i).unwrap_or(&zero), ys.get(i).unwrap_or(&zero)))
                    .collect();
                normalize(*k, cs)
            }
            _ => {
                let (hi, lo) = if a.level() > b.level() { (a, b) } else { (b, a) };
                let Node::Ext(k, cs) = hi else { unreachable!() };
                let mut cs = cs.clone();
                cs[0] = self.add(&cs[0], lo);
                normalize(*k, cs)
            }
        }
    }

    pub fn neg(&self, a: &Node) -> Node {
        match a {
            Node::Rat(x) => Node::Rat(-x),
            Node::Ext(k, cs) => Node::Ext(*k, cs.iter().map(|c| self.neg(c)).collect()),
        }
    }

    pub fn sub(&self, a: &Node, b: &Node) -> Node {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Node, b: &Node) -> Node {
        if a.is_zero() || b.is_zero() {
            return Node::zero();
        }
        match (a, b) {
            (Node::Rat(x), Node::Rat(y)) => Node::Rat(x * y),
            (Node::Ext(k, xs), Node::Ext(l, ys)) if k == l => {
                let mut cs = vec![Node::zero(); xs.len() + ys.len() - 1];
                for (i, x) in xs.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in ys.iter().enumerate() {
                        let t = self.mul(x, y);
                        cs[i + j] = self.add(&cs[i + j], &t);
                    }
                }
                self.reduce_poly_node(*k, cs)
            }
            _ => {
                let (hi, lo) = if a.level() > b.level() { (a, b) } else { (b, a) };
                let Node::Ext(k, cs) = hi else { unreachable!() };
                normalize(*k, cs.iter().map(|c| self.mul(c, lo)).collect())
            }
        }
    }

    pub fn scale(&self, a: &Node, r: &Rational) -> Node {
        self.mul(a, &Node::Rat(r.clone()))
    }

    pub fn pow(&self, a: &Node, mut e: u32) -> Node {
        let mut base = a.clone();
        let mut acc = Node::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Multiplicative inverse, or the splitting of a modulus if `a` is a
    /// zero divisor.
    pub fn inv(&self, a: &Node) -> NumResult<Node> {
        match a {
            Node::Rat(r) if r.is_zero() => Err(NumError::DivisionByZero),
            Node::Rat(r) => Ok(Node::Rat(r.recip())),
            Node::Ext(k, cs) => {
                let m = &self.level(*k).modulus;
                let (g, s) = upoly::gcd_inverse(self, cs, m)?;
                if g.len() == 1 {
                    Ok(self.reduce_poly_node(*k, s))
                } else {
                    let (cofactor, rem) = upoly::divrem(self, m, &g)?;
                    debug_assert!(rem.is_empty());
                    Err(NumError::Split(SplitEvent {
                        level: *k,
                        factors: [g, cofactor],
                    }))
                }
            }
        }
    }

    pub fn div(&self, a: &Node, b: &Node) -> NumResult<Node> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Zero test valid on every branch: a canonically nonzero element is
    /// confirmed nonzero only by inverting it.
    pub fn is_zero_dyn(&self, a: &Node) -> NumResult<bool> {
        if a.is_zero() {
            return Ok(true);
        }
        match self.inv(a) {
            Ok(_) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// `Some(r)` iff `a` is canonically a rational number.
    pub fn rational_value(&self, a: &Node) -> Option<Rational> {
        a.as_rational().cloned()
    }

    /// Rationality test valid at every point of the tower: finds the
    /// rational roots `c` of the minimal polynomial of `a` over ℚ and tests
    /// `a − c` with [`FieldTower::is_zero_dyn`].
    pub fn rational_value_dyn(&self, a: &Node) -> NumResult<Option<Rational>> {
        if let Some(r) = a.as_rational() {
            return Ok(Some(r.clone()));
        }
        let minpoly = qpoly::minimal_polynomial(self, a);
        for c in rational_roots(&minpoly) {
            let diff = self.sub(a, &Node::Rat(c.clone()));
            if self.is_zero_dyn(&diff)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    /// Coordinates of `a` over ℚ in the power basis of the whole tower
    /// (mixed radix, level 1 fastest).
    pub fn flatten(&self, a: &Node) -> Vec<Rational> {
        self.flatten_at(a, self.height())
    }

    fn flatten_at(&self, a: &Node, top: usize) -> Vec<Rational> {
        if top == 0 {
            return vec![a.as_rational().cloned().expect("level-0 node is rational")];
        }
        let d = self.level(top).degree();
        let block = self.levels[..top - 1].iter().map(Level::degree).product::<usize>();
        let mut out = vec![Rational::zero(); block * d];
        match a {
            Node::Ext(k, cs) if *k == top => {
                for (i, c) in cs.iter().enumerate() {
                    let v = self.flatten_at(c, top - 1);
                    out[i * block..(i + 1) * block].clone_from_slice(&v);
                }
            }
            _ => {
                let v = self.flatten_at(a, top - 1);
                out[..block].clone_from_slice(&v);
            }
        }
        out
    }

    /// Human-readable form, e.g. `b - 1` or `(z + 1)*w + 2`.
    pub fn fmt_node(&self, a: &Node) -> String {
        match a {
            Node::Rat(r) => fmt_rational(r),
            Node::Ext(k, cs) => {
                let name = &self.level(*k).name;
                let mut parts: Vec<(bool, String)> = Vec::new();
                for (i, c) in cs.iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    let mono = match i {
                        0 => String::new(),
                        1 => name.clone(),
                        _ => format!("{name}^{i}"),
                    };
                    let (neg, body) = self.fmt_coeff_times(c, &mono);
                    parts.push((neg, body));
                }
                join_signed(&parts)
            }
        }
    }

    /// Formats `c·mono` returning (is_negative, magnitude text).
    pub(crate) fn fmt_coeff_times(&self, c: &Node, mono: &str) -> (bool, String) {
        match c {
            Node::Rat(r) => {
                let neg = r.is_negative();
                let mag = r.abs();
                let body = if mono.is_empty() {
                    fmt_rational(&mag)
                } else if mag.is_one() {
                    mono.to_string()
                } else {
                    format!("{}*{}", fmt_rational(&mag), mono)
                };
                (neg, body)
            }
            Node::Ext(..) => {
                let inner = self.fmt_node(c);
                let (neg, body) = match inner.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, inner.clone()),
                };
                let single = !body.contains(" + ") && !body.contains(" - ");
                match (single, mono.is_empty()) {
                    (true, true) => (neg, body),
                    (true, false) => (neg, format!("{body}*{mono}")),
                    (false, true) => (false, format!("({inner})")),
                    (false, false) => (false, format!("({inner})*{mono}")),
                }
            }
        }
    }

    /// Declaration text `name: minpoly [~ hint]` for every level.
    pub fn declarations(&self) -> Vec<String> {
        (1..=self.height())
            .map(|k| {
                let lvl = self.level(k);
                let poly = upoly::fmt(self, &lvl.modulus, &lvl.name);
                match &lvl.hint {
                    Some(h) => format!("{}: {} ~ {}", lvl.name, poly, h),
                    None => format!("{}: {}", lvl.name, poly),
                }
            })
            .collect()
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.levels.is_empty() {
            return write!(f, "Q");
        }
        write!(f, "Q[{}]", self.declarations().join("; "))
    }
}

pub(crate) fn normalize(k: usize, mut cs: Vec<Node>) -> Node {
    while cs.last().is_some_and(Node::is_zero) {
        cs.pop();
    }
    match cs.len() {
        0 => Node::zero(),
        1 => cs.pop().expect("len 1"),
        _ => Node::Ext(k, cs),
    }
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Joins signed terms as `a - b + c`; empty input is `0`.
pub(crate) fn join_signed(parts: &[(bool, String)]) -> String {
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (neg, body)) in parts.iter().enumerate() {
        if idx == 0 {
            if *neg {
                out.push('-');
            }
        } else {
            out.push_str(if *neg { " - " } else { " + " });
        }
        out.push_str(body);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> FieldTower {
        let m = vec![Node::from_int(-2), Node::zero(), Node::one()];
        FieldTower::rationals().extend(m, "b", Some("1.414".into())).unwrap()
    }

    #[test]
    fn invert_rational() {
        let t = FieldTower::rationals();
        assert_eq!(t.inv(&Node::from_int(2)).unwrap(), Node::Rat(rat(1, 2)));
        assert_eq!(t.inv(&Node::zero()), Err(NumError::DivisionByZero));
    }

    #[test]
    fn invert_sqrt2() {
        let t = sqrt2();
        let b = t.generator(1);
        let inv = t.inv(&b).unwrap();
        assert_eq!(inv, Node::Ext(1, vec![Node::zero(), Node::Rat(rat(1, 2))]));
        assert!(t.mul(&b, &inv).is_one());
    }

    #[test]
    fn zero_divisor_splits() {
        let m = vec![Node::from_int(-1), Node::zero(), Node::one()];
        let t = FieldTower::rationals().extend(m, "a", None).unwrap();
        let x = t.sub(&t.generator(1), &Node::one());
        match t.inv(&x) {
            Err(NumError::Split(ev)) => {
                assert_eq!(ev.level, 1);
                let mut fs: Vec<_> = ev.factors.iter().map(|f| upoly::fmt(&t, f, "a")).collect();
                fs.sort();
                assert_eq!(fs, vec!["a + 1".to_string(), "a - 1".to_string()]);
            }
            other => panic!("expected split, got {other:?}"),
        }
    }

    #[test]
    fn squarefree_required() {
        let m = vec![Node::one(), Node::from_int(2), Node::one()];
        assert_eq!(
            FieldTower::rationals().extend(m, "a", None),
            Err(NumError::NotSquarefree)
        );
        let t = sqrt2();
        let m = vec![Node::from_int(-3), Node::zero(), Node::one()];
        assert_eq!(t.extend(m, "b", None), Err(NumError::NameClash("b".into())));
    }

    #[test]
    fn rational_values() {
        let t = sqrt2();
        let b = t.generator(1);
        assert_eq!(t.rational_value(&Node::Rat(rat(3, 4))), Some(rat(3, 4)));
        assert_eq!(t.rational_value(&b), None);
        assert_eq!(t.rational_value(&t.mul(&b, &b)), Some(int(2)));
    }

    #[test]
    fn rational_value_dyn_sees_through_reducible_modulus() {
        // a with a^4 - 5a^2 + 6 = (a^2-2)(a^2-3): a^2 is rational at every
        // root but not canonically.
        let m = vec![Node::from_int(6), Node::zero(), Node::from_int(-5), Node::zero(), Node::one()];
        let t = FieldTower::rationals().extend(m, "a", None).unwrap();
        let a2 = t.mul(&t.generator(1), &t.generator(1));
        assert_eq!(t.rational_value(&a2), None);
        match t.rational_value_dyn(&a2) {
            Err(NumError::Split(ev)) => assert_eq!(ev.level, 1),
            other => panic!("expected split, got {other:?}"),
        }
        let t2 = t.specialize(1, &[Node::from_int(-2), Node::zero(), Node::one()]);
        let a2 = t2.reduce(&a2);
        assert_eq!(t2.rational_value_dyn(&a2).unwrap(), Some(int(2)));
    }

    #[test]
    fn nested_tower_arithmetic() {
        // z: z^2+z+1, w: w^2 - z
        let t = FieldTower::rationals()
            .extend(vec![Node::one(), Node::one(), Node::one()], "z", None)
            .unwrap();
        let z = t.generator(1);
        let t = t
            .extend(vec![t.neg(&z), Node::zero(), Node::one()], "w", None)
            .unwrap();
        let w = t.generator(2);
        let w6 = t.pow(&w, 6);
        assert!(w6.is_one());
        let inv = t.inv(&t.add(&w, &Node::one())).unwrap();
        assert!(t.mul(&inv, &t.add(&w, &Node::one())).is_one());
        assert_eq!(t.fmt_node(&t.add(&w, &z)), "w + z");
    }
}
