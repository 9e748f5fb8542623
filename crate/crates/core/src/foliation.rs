//! Germs of foliations given by 1-forms `A dx + B dy` and the local
//! invariants read off them at the origin.

use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numfield::{AlgebraicElement, FieldTower, Node, NumResult, Rational, TowerRef};
use crate::polyring::{intersection_number, Order, Poly2};

/// `A dx + B dy` with `(A, B) ≠ (0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneForm {
    a: Poly2,
    b: Poly2,
}

impl OneForm {
    pub fn new(a: Poly2, b: Poly2) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroForm);
        }
        assert!(
            **a.tower() == **b.tower(),
            "coefficients must live over the same tower"
        );
        Ok(OneForm { a, b })
    }

    /// `df = f_x dx + f_y dy`.
    pub fn differential(f: &Poly2) -> Result<Self> {
        OneForm::new(f.dx(), f.dy())
    }

    pub fn a(&self) -> &Poly2 {
        &self.a
    }

    pub fn b(&self) -> &Poly2 {
        &self.b
    }

    pub fn tower(&self) -> &TowerRef {
        self.a.tower()
    }

    pub fn with_tower(&self, tower: &TowerRef) -> OneForm {
        OneForm {
            a: self.a.with_tower(tower),
            b: self.b.with_tower(tower),
        }
    }

    pub fn scale(&self, c: &Node) -> OneForm {
        OneForm {
            a: self.a.scale(c),
            b: self.b.scale(c),
        }
    }

    pub fn is_saturated(&self) -> NumResult<bool> {
        Ok(self.a.gcd(&self.b)?.total_degree() == Some(0))
    }

    /// Text in the input grammar, with the given coordinate names.
    pub fn fmt_with(&self, u: &str, v: &str) -> String {
        let mut out = String::new();
        if !self.a.is_zero() {
            out.push_str(&format!("({}) d{u}", self.a.fmt_with(u, v)));
        }
        if !self.b.is_zero() {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&format!("({}) d{v}", self.b.fmt_with(u, v)));
        }
        out
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with("x", "y"))
    }
}

/// Divides `A` and `B` by their gcd.
pub fn saturate(a: &Poly2, b: &Poly2) -> Result<OneForm> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroForm);
    }
    let g = a.gcd(b)?;
    if g.total_degree() == Some(0) {
        return OneForm::new(a.clone(), b.clone());
    }
    let div = |p: &Poly2| -> Result<Poly2> { Ok(p.div_exact(&g)?.expect("gcd divides")) };
    OneForm::new(div(a)?, div(b)?)
}

/// `min(ord A, ord B)`.
pub fn multiplicity(w: &OneForm) -> u64 {
    w.a.total_order()
        .min(w.b.total_order())
        .finite()
        .expect("nonzero form has finite order")
}

/// Whether `f = 0` is invariant, with the cofactor `(A f_y − B f_x) / f`.
pub fn is_invariant(w: &OneForm, f: &Poly2) -> Result<(bool, Option<Poly2>)> {
    if f.is_zero() {
        return Err(Error::Invalid("the zero polynomial defines no curve".into()));
    }
    let h = w.a.mul(&f.dy()).sub(&w.b.mul(&f.dx()));
    match h.div_exact(f)? {
        Some(q) => Ok((true, Some(q))),
        None => Ok((false, None)),
    }
}

/// `(f_x, f_y)₀`.
pub fn milnor_number(f: &Poly2) -> Result<Order> {
    Ok(intersection_number(&f.dx(), &f.dy())?)
}

/// `(A, B)₀`.
pub fn ph_index(w: &OneForm) -> Result<Order> {
    Ok(intersection_number(&w.a, &w.b)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonReducedKind {
    ResonantRatio,
    Nilpotent,
    ZeroLinearPart,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SingularityKind {
    Regular,
    ReducedNonDegenerate,
    /// `weak_direction` spans the kernel of the linear part, as `(du, dv)`
    /// with the first nonzero coordinate equal to 1.
    SaddleNode {
        weak_direction: (AlgebraicElement, AlgebraicElement),
    },
    NonReduced(NonReducedKind),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityClass {
    pub kind: SingularityKind,
    pub trace: AlgebraicElement,
    pub det: AlgebraicElement,
    /// Present when both eigenvalues lie in the tower (triangular linear
    /// part or a rational square discriminant).
    pub eigenvalues: Option<(AlgebraicElement, AlgebraicElement)>,
}

impl SingularityClass {
    pub fn tag(&self) -> &'static str {
        match self.kind {
            SingularityKind::Regular => "regular",
            SingularityKind::ReducedNonDegenerate => "reduced",
            SingularityKind::SaddleNode { .. } => "saddle-node",
            SingularityKind::NonReduced(_) => "non-reduced",
        }
    }

    pub fn is_reduced(&self) -> bool {
        matches!(
            self.kind,
            SingularityKind::Regular
                | SingularityKind::ReducedNonDegenerate
                | SingularityKind::SaddleNode { .. }
        )
    }

    /// Eigenvalues as text, or the characteristic data when they are not
    /// in the tower.
    pub fn eigen_text(&self) -> String {
        match &self.eigenvalues {
            Some((l, m)) => format!("({l}, {m})"),
            None => format!("trace {}, det {}", self.trace, self.det),
        }
    }
}

/// Linear part of the dual field `X = B∂x − A∂y` at the origin.
pub fn linear_part(w: &OneForm) -> [[Node; 2]; 2] {
    let t = w.tower();
    [
        [w.b.coeff(1, 0), w.b.coeff(0, 1)],
        [t.neg(&w.a.coeff(1, 0)), t.neg(&w.a.coeff(0, 1))],
    ]
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

/// Classifies the singularity of `w` at the origin.
pub fn classify_singularity(w: &OneForm) -> Result<SingularityClass> {
    let tower = w.tower().clone();
    let t: &FieldTower = &tower;
    let el = |n: Node| AlgebraicElement::new(tower.clone(), n);
    if !t.is_zero_dyn(&w.a.constant_term())? || !t.is_zero_dyn(&w.b.constant_term())? {
        return Ok(SingularityClass {
            kind: SingularityKind::Regular,
            trace: el(Node::zero()),
            det: el(Node::zero()),
            eigenvalues: None,
        });
    }
    let j = linear_part(w);
    let trace = t.add(&j[0][0], &j[1][1]);
    let det = t.sub(&t.mul(&j[0][0], &j[1][1]), &t.mul(&j[0][1], &j[1][0]));
    let eigenvalues = eigenvalues(t, &j, &trace, &det)?.map(|(l, m)| (el(l), el(m)));
    let kind = if t.is_zero_dyn(&det)? {
        if !t.is_zero_dyn(&trace)? {
            SingularityKind::SaddleNode {
                weak_direction: {
                    let (du, dv) = kernel(t, &j)?;
                    (el(du), el(dv))
                },
            }
        } else {
            let mut all_zero = true;
            for c in j.iter().flatten() {
                all_zero &= t.is_zero_dyn(c)?;
            }
            SingularityKind::NonReduced(if all_zero {
                NonReducedKind::ZeroLinearPart
            } else {
                NonReducedKind::Nilpotent
            })
        }
    } else {
        let tau = t.div(&t.mul(&trace, &trace), &det)?;
        match t.rational_value_dyn(&tau)? {
            Some(tau) if resonant(&tau) => SingularityKind::NonReduced(NonReducedKind::ResonantRatio),
            _ => SingularityKind::ReducedNonDegenerate,
        }
    };
    Ok(SingularityClass {
        kind,
        trace: el(trace),
        det: el(det),
        eigenvalues,
    })
}

/// With `τ = (λ+μ)²/(λμ)`, the ratio `r = λ/μ` solves `r² + (2−τ)r + 1 = 0`;
/// it is a positive rational iff the discriminant is a rational square and
/// `τ > 2`.
fn resonant(tau: &Rational) -> bool {
    let two = Rational::from_integer(2.into());
    let four = Rational::from_integer(4.into());
    let disc = tau * (tau - &four);
    rational_sqrt(&disc).is_some() && *tau > two
}

fn eigenvalues(
    t: &FieldTower,
    j: &[[Node; 2]; 2],
    trace: &Node,
    det: &Node,
) -> NumResult<Option<(Node, Node)>> {
    if t.is_zero_dyn(&j[0][1])? || t.is_zero_dyn(&j[1][0])? {
        return Ok(Some((j[0][0].clone(), j[1][1].clone())));
    }
    let disc = t.sub(&t.mul(trace, trace), &t.scale(det, &Rational::from_integer(4.into())));
    let Some(d) = t.rational_value_dyn(&disc)? else {
        return Ok(None);
    };
    let Some(s) = rational_sqrt(&d) else {
        return Ok(None);
    };
    let half = Rational::new(1.into(), 2.into());
    let s = Node::Rat(s);
    Ok(Some((
        t.scale(&t.add(trace, &s), &half),
        t.scale(&t.sub(trace, &s), &half),
    )))
}

/// Projective kernel of a rank-one matrix, normalized.
fn kernel(t: &FieldTower, j: &[[Node; 2]; 2]) -> NumResult<(Node, Node)> {
    let row = if t.is_zero_dyn(&j[0][0])? && t.is_zero_dyn(&j[0][1])? {
        &j[1]
    } else {
        &j[0]
    };
    let (du, dv) = (t.neg(&row[1]), row[0].clone());
    if t.is_zero_dyn(&du)? {
        return Ok((Node::zero(), Node::one()));
    }
    Ok((Node::one(), t.div(&dv, &du)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rationals;

    fn q(terms: &[(u32, u32, i64)]) -> Poly2 {
        Poly2::from_int_terms(rationals(), terms)
    }

    fn form(a: &[(u32, u32, i64)], b: &[(u32, u32, i64)]) -> OneForm {
        OneForm::new(q(a), q(b)).unwrap()
    }

    fn ex23() -> OneForm {
        form(&[(1, 1, 1), (0, 2, 1)], &[(2, 0, -1)])
    }

    #[test]
    fn saturation() {
        let w = saturate(&q(&[(2, 1, 1)]), &q(&[(2, 0, 1)])).unwrap();
        assert_eq!(w, form(&[(0, 1, 1)], &[(0, 0, 1)]));
        let w = saturate(&q(&[(1, 1, 1), (0, 2, 1)]), &q(&[(1, 1, 1)])).unwrap();
        assert_eq!(w, form(&[(1, 0, 1), (0, 1, 1)], &[(1, 0, 1)]));
        assert_eq!(saturate(&q(&[]), &q(&[])), Err(Error::ZeroForm));
        assert_eq!(saturate(ex23().a(), ex23().b()).unwrap(), ex23());
    }

    #[test]
    fn multiplicities_and_indices() {
        assert_eq!(multiplicity(&ex23()), 2);
        let cusp = q(&[(0, 2, 1), (3, 0, -1)]);
        let dcusp = OneForm::differential(&cusp).unwrap();
        assert_eq!(multiplicity(&dcusp), 1);
        assert_eq!(milnor_number(&cusp).unwrap(), Order::Finite(2));
        assert_eq!(ph_index(&dcusp).unwrap(), Order::Finite(2));
        assert_eq!(ph_index(&ex23()).unwrap(), Order::Finite(4));
        assert_eq!(ph_index(&form(&[(0, 1, -1)], &[(1, 0, 1)])).unwrap(), Order::Finite(1));
        assert_eq!(milnor_number(&q(&[(1, 1, 1)])).unwrap(), Order::Finite(1));
        assert_eq!(milnor_number(&q(&[(0, 5, 1), (3, 0, -1)])).unwrap(), Order::Finite(8));
    }

    #[test]
    fn invariance() {
        let (inv, cof) = is_invariant(&ex23(), &q(&[(1, 1, 1)])).unwrap();
        assert!(inv);
        assert_eq!(cof.unwrap(), q(&[(1, 0, 2), (0, 1, 1)]));
        assert!(!is_invariant(&form(&[(0, 0, 1)], &[]), &q(&[(0, 1, 1)])).unwrap().0);
    }

    #[test]
    fn saddle_node_in_chart() {
        // t^2 dx - x dt in coordinates (x, t)
        let w = form(&[(0, 2, 1)], &[(1, 0, -1)]);
        let c = classify_singularity(&w).unwrap();
        let (l, m) = c.eigenvalues.clone().unwrap();
        assert_eq!((l.to_string(), m.to_string()), ("-1".into(), "0".into()));
        match c.kind {
            SingularityKind::SaddleNode { weak_direction } => {
                assert!(weak_direction.0.is_zero());
                assert_eq!(weak_direction.1.to_string(), "1");
            }
            k => panic!("unexpected {k:?}"),
        }
    }

    #[test]
    fn ratios() {
        // X = x∂x - y∂y
        let c = classify_singularity(&form(&[(0, 1, 1)], &[(1, 0, 1)])).unwrap();
        assert_eq!(c.kind, SingularityKind::ReducedNonDegenerate);
        // X = 2x∂x + 3y∂y
        let c = classify_singularity(&form(&[(0, 1, -3)], &[(1, 0, 2)])).unwrap();
        assert_eq!(c.kind, SingularityKind::NonReduced(NonReducedKind::ResonantRatio));
        // swapped listing
        let c = classify_singularity(&form(&[(0, 1, -2)], &[(1, 0, 3)])).unwrap();
        assert_eq!(c.kind, SingularityKind::NonReduced(NonReducedKind::ResonantRatio));
        // X = y∂x + x∂y has eigenvalues ±1, not triangular
        let c = classify_singularity(&form(&[(1, 0, -1)], &[(0, 1, 1)])).unwrap();
        assert_eq!(c.kind, SingularityKind::ReducedNonDegenerate);
        assert_eq!(c.eigen_text(), "(1, -1)");
        // X = y∂x + 2x∂y: eigenvalues ±√2, ratio -1
        let c = classify_singularity(&form(&[(1, 0, -2)], &[(0, 1, 1)])).unwrap();
        assert_eq!(c.kind, SingularityKind::ReducedNonDegenerate);
        assert!(c.eigenvalues.is_none());
        // nilpotent and zero linear part
        let c = classify_singularity(&form(&[(2, 0, 1)], &[(0, 1, 1)])).unwrap();
        assert_eq!(c.kind, SingularityKind::NonReduced(NonReducedKind::Nilpotent));
        let c = classify_singularity(&ex23()).unwrap();
        assert_eq!(c.kind, SingularityKind::NonReduced(NonReducedKind::ZeroLinearPart));
        assert_eq!(classify_singularity(&form(&[(0, 0, 1)], &[])).unwrap().kind, SingularityKind::Regular);
    }
}
