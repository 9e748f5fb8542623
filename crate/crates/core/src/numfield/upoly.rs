//! Dense univariate polynomials over a tower, coefficients low to high with
//! trailing zeros trimmed. The empty vector is the zero polynomial.

use super::{join_signed, FieldTower, Node, NumResult};

pub type UPoly = Vec<Node>;

pub fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(Node::is_zero) {
        p.pop();
    }
    p
}

/// Degree, `None` for the zero polynomial.
pub fn degree(p: &[Node]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn add(t: &FieldTower, a: &[Node], b: &[Node]) -> UPoly {
    let n = a.len().max(b.len());
    let zero = Node::zero();
    trim(
        (0..n)
            .map(|i| t.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
            .collect(),
    )
}

pub fn neg(t: &FieldTower, a: &[Node]) -> UPoly {
    a.iter().map(|c| t.neg(c)).collect()
}

pub fn sub(t: &FieldTower, a: &[Node], b: &[Node]) -> UPoly {
    add(t, a, &neg(t, b))
}

pub fn mul(t: &FieldTower, a: &[Node], b: &[Node]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Node::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let p = t.mul(x, y);
            out[i + j] = t.add(&out[i + j], &p);
        }
    }
    trim(out)
}

pub fn scale(t: &FieldTower, a: &[Node], c: &Node) -> UPoly {
    trim(a.iter().map(|x| t.mul(x, c)).collect())
}

pub fn derivative(t: &FieldTower, a: &[Node]) -> UPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| t.mul(c, &Node::from_int(i as i64)))
            .collect(),
    )
}

pub fn eval(t: &FieldTower, a: &[Node], x: &Node) -> Node {
    a.iter()
        .rev()
        .fold(Node::zero(), |acc, c| t.add(&t.mul(&acc, x), c))
}

/// `a(s + c)` as a polynomial in `s`.
pub fn shift(t: &FieldTower, a: &[Node], c: &Node) -> UPoly {
    let lin = trim(vec![c.clone(), Node::one()]);
    a.iter()
        .rev()
        .fold(Vec::new(), |acc, coef| add(t, &mul(t, &acc, &lin), std::slice::from_ref(coef)))
}

/// Division with remainder; the leading coefficient of `b` must be
/// invertible (a zero divisor reports a split).
pub fn divrem(t: &FieldTower, a: &[Node], b: &[Node]) -> NumResult<(UPoly, UPoly)> {
    let db = degree(b).ok_or(super::NumError::DivisionByZero)?;
    let lc_inv = t.inv(&b[db])?;
    let mut r = a.to_vec();
    if r.len() <= db {
        return Ok((Vec::new(), trim(r)));
    }
    let mut q = vec![Node::zero(); r.len() - db];
    while r.len() > db {
        let top = r.pop().expect("nonempty");
        if top.is_zero() {
            continue;
        }
        let c = t.mul(&top, &lc_inv);
        let shift = r.len() - db;
        for (j, bj) in b[..db].iter().enumerate() {
            let p = t.mul(&c, bj);
            r[shift + j] = t.sub(&r[shift + j], &p);
        }
        q[shift] = c;
    }
    Ok((trim(q), trim(r)))
}

pub fn monic(t: &FieldTower, a: &[Node]) -> NumResult<UPoly> {
    match a.last() {
        None => Ok(Vec::new()),
        Some(lc) => {
            let inv = t.inv(lc)?;
            Ok(scale(t, a, &inv))
        }
    }
}

/// Monic gcd; the gcd of two zero polynomials is zero.
pub fn gcd(t: &FieldTower, a: &[Node], b: &[Node]) -> NumResult<UPoly> {
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    while !r1.is_empty() {
        let (_, r) = divrem(t, &r0, &r1)?;
        r0 = r1;
        r1 = r;
    }
    monic(t, &r0)
}

/// For `a` reduced modulo the monic `m`: returns `(g, s)` with `g` the monic
/// gcd and `s·a ≡ g (mod m)`.
pub fn gcd_inverse(t: &FieldTower, a: &[Node], m: &[Node]) -> NumResult<(UPoly, UPoly)> {
    let (mut r0, mut r1) = (m.to_vec(), trim(a.to_vec()));
    let (mut s0, mut s1): (UPoly, UPoly) = (Vec::new(), vec![Node::one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(t, &r0, &r1)?;
        let s2 = sub(t, &s0, &mul(t, &q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    let lc = r0.last().cloned().ok_or(super::NumError::DivisionByZero)?;
    let inv = t.inv(&lc)?;
    Ok((scale(t, &r0, &inv), scale(t, &s0, &inv)))
}

/// Squarefree part `a / gcd(a, a')`, monic.
pub fn squarefree_part(t: &FieldTower, a: &[Node]) -> NumResult<UPoly> {
    let g = gcd(t, a, &derivative(t, a))?;
    let (q, _) = divrem(t, a, &g)?;
    monic(t, &q)
}

pub fn fmt(t: &FieldTower, a: &[Node], var: &str) -> String {
    let mut parts = Vec::new();
    for (i, c) in a.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        parts.push(t.fmt_coeff_times(c, &mono));
    }
    join_signed(&parts)
}
