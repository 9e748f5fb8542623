//! Gcd and exact division in `K[x, y]`, viewed as `K[x][y]` for the gcd
//! (primitive pseudo-remainder sequence) and with lex `y > x` leading terms
//! for division.

use crate::numfield::upoly::{self, UPoly};
use crate::numfield::{FieldTower, Node, NumResult, TowerRef};

use super::{Monomial2, Poly2};

/// Coefficients in `K[x]` indexed by y-degree, trailing zeros trimmed.
pub(super) type YPoly = Vec<UPoly>;

pub(super) fn to_ypoly(p: &Poly2) -> YPoly {
    let mut out: YPoly = Vec::new();
    for (m, c) in p.terms() {
        let (i, j) = (m.i as usize, m.j as usize);
        if out.len() <= j {
            out.resize(j + 1, Vec::new());
        }
        if out[j].len() <= i {
            out[j].resize(i + 1, Node::zero());
        }
        out[j][i] = c.clone();
    }
    for c in out.iter_mut() {
        *c = upoly::trim(std::mem::take(c));
    }
    trim_y(out)
}

pub(super) fn from_ypoly(tower: &TowerRef, p: &YPoly) -> Poly2 {
    let mut out = Poly2::zero(tower.clone());
    for (j, cx) in p.iter().enumerate() {
        for (i, c) in cx.iter().enumerate() {
            out.add_term(Monomial2::new(i as u32, j as u32), c);
        }
    }
    out
}

fn trim_y(mut p: YPoly) -> YPoly {
    while p.last().is_some_and(|c| c.is_empty()) {
        p.pop();
    }
    p
}

fn content(t: &FieldTower, p: &YPoly) -> NumResult<UPoly> {
    let mut g: UPoly = Vec::new();
    for c in p {
        g = upoly::gcd(t, &g, c)?;
        if g.len() == 1 {
            break;
        }
    }
    Ok(g)
}

fn div_coeffs(t: &FieldTower, p: &YPoly, d: &UPoly) -> NumResult<YPoly> {
    p.iter()
        .map(|c| {
            let (q, r) = upoly::divrem(t, c, d)?;
            debug_assert!(r.is_empty(), "content must divide every coefficient");
            Ok(q)
        })
        .collect()
}

fn primitive_part(t: &FieldTower, p: &YPoly) -> NumResult<YPoly> {
    if p.is_empty() {
        return Ok(Vec::new());
    }
    let c = content(t, p)?;
    div_coeffs(t, p, &c)
}

/// `lc(b)^k · a mod b` by repeated leading-term elimination.
fn pseudo_rem(t: &FieldTower, a: &YPoly, b: &YPoly) -> YPoly {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: YPoly = r.iter().map(|c| upoly::mul(t, c, lb)).collect();
        for (j, bj) in b.iter().enumerate() {
            let sub = upoly::mul(t, bj, &lr);
            next[j + shift] = upoly::sub(t, &next[j + shift], &sub);
        }
        r = trim_y(next);
    }
    r
}

pub(super) fn gcd(a: &Poly2, b: &Poly2) -> NumResult<Poly2> {
    let tower = a.tower().clone();
    let t: &FieldTower = &tower;
    let (pa, pb) = (to_ypoly(a), to_ypoly(b));
    if pa.is_empty() {
        return normalize(b);
    }
    if pb.is_empty() {
        return normalize(a);
    }
    let c = upoly::gcd(t, &content(t, &pa)?, &content(t, &pb)?)?;
    let (mut f, mut g) = (primitive_part(t, &pa)?, primitive_part(t, &pb)?);
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    let prim = loop {
        if g.len() == 1 {
            break vec![vec![Node::one()]];
        }
        let r = pseudo_rem(t, &f, &g);
        if r.is_empty() {
            break g;
        }
        f = g;
        g = primitive_part(t, &r)?;
    };
    let out: YPoly = prim.iter().map(|cx| upoly::mul(t, cx, &c)).collect();
    normalize(&from_ypoly(&tower, &trim_y(out)))
}

/// Scales so the lex-leading coefficient (y-degree first) is 1.
pub(super) fn normalize(p: &Poly2) -> NumResult<Poly2> {
    match leading(p) {
        None => Ok(p.clone()),
        Some((_, c)) => {
            let inv = p.tower().inv(&c)?;
            Ok(p.scale(&inv))
        }
    }
}

fn leading(p: &Poly2) -> Option<(Monomial2, Node)> {
    p.terms()
        .iter()
        .max_by_key(|(m, _)| (m.j, m.i))
        .map(|(m, c)| (*m, c.clone()))
}

pub(super) fn div_exact(a: &Poly2, g: &Poly2) -> NumResult<Option<Poly2>> {
    let (lm, lc) = leading(g).ok_or(crate::numfield::NumError::DivisionByZero)?;
    let t = a.tower().clone();
    let inv = t.inv(&lc)?;
    let mut r = a.clone();
    let mut q = Poly2::zero(t.clone());
    while let Some((m, c)) = leading(&r) {
        if m.i < lm.i || m.j < lm.j {
            return Ok(None);
        }
        let (di, dj) = (m.i - lm.i, m.j - lm.j);
        let coef = t.mul(&c, &inv);
        q.add_term(Monomial2::new(di, dj), &coef);
        r = r.sub(&g.mul_monomial(di, dj).scale(&coef));
    }
    Ok(Some(q))
}
