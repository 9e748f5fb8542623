//! Local intersection multiplicity at the origin through y-resultants.

use crate::numfield::upoly::{self, UPoly};
use crate::numfield::{FieldTower, Node, NumResult};

use super::gcd::to_ypoly;
use super::{Order, Poly1, Poly2};

/// Shear constants tried before giving up; coprime inputs have finitely many
/// bad directions, so this is never reached in practice.
const MAX_SHEAR: i64 = 512;

/// `Res_y(f, g)` as a polynomial in `x` (Sylvester determinant, fraction-free
/// elimination over `K[x]`).
pub fn resultant_y(f: &Poly2, g: &Poly2) -> NumResult<Poly1> {
    let tower = f.tower().clone();
    let t: &FieldTower = &tower;
    let (fy, gy) = (to_ypoly(f), to_ypoly(g));
    if fy.is_empty() || gy.is_empty() {
        return Ok(Poly1::zero(tower));
    }
    let (m, n) = (fy.len() - 1, gy.len() - 1);
    let size = m + n;
    if size == 0 {
        return Ok(Poly1::new(tower.clone(), vec![Node::one()]));
    }
    let mut mat: Vec<Vec<UPoly>> = vec![vec![Vec::new(); size]; size];
    for r in 0..n {
        for (k, c) in fy.iter().rev().enumerate() {
            mat[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in gy.iter().rev().enumerate() {
            mat[n + r][r + k] = c.clone();
        }
    }
    Ok(Poly1::new(tower.clone(), bareiss_det(t, mat)?))
}

fn bareiss_det(t: &FieldTower, mut mat: Vec<Vec<UPoly>>) -> NumResult<UPoly> {
    let n = mat.len();
    let mut negate = false;
    let mut prev: UPoly = vec![Node::one()];
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !mat[r][k].is_empty()) else {
            return Ok(Vec::new());
        };
        if p != k {
            mat.swap(p, k);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = upoly::mul(t, &mat[i][j], &mat[k][k]);
                let b = upoly::mul(t, &mat[i][k], &mat[k][j]);
                let num = upoly::sub(t, &a, &b);
                let (q, r) = upoly::divrem(t, &num, &prev)?;
                debug_assert!(r.is_empty(), "Bareiss division is exact");
                mat[i][j] = q;
            }
            mat[i][k] = Vec::new();
        }
        prev = mat[k][k].clone();
    }
    let det = mat[n - 1][n - 1].clone();
    Ok(if negate { upoly::neg(t, &det) } else { det })
}

/// Leading y-coefficient is a nonzero constant (no intersection escapes to
/// infinity along `x = 0`).
fn y_regular(t: &FieldTower, p: &Poly2) -> NumResult<bool> {
    let (Some(d), Some(dy)) = (p.total_degree(), p.degree_y()) else {
        return Ok(false);
    };
    if d != dy {
        return Ok(false);
    }
    Ok(!t.is_zero_dyn(&p.coeff(0, d))?)
}

/// Local intersection multiplicity `(f, g)₀`.
///
/// A common factor through the origin gives `∞`; a common factor that is a
/// unit at the origin is divided out. The remaining coprime pair is sheared
/// by `x ← x + c·y` for `c = 0, 1, 2, …` until both are y-regular and the
/// line `x = 0` meets their common zeros only at the origin; the answer is
/// then the x-order of the y-resultant.
pub fn intersection_number(f: &Poly2, g: &Poly2) -> NumResult<Order> {
    let tower = f.tower().clone();
    let t: &FieldTower = &tower;
    if f.is_zero() || g.is_zero() {
        let other = if f.is_zero() { g } else { f };
        if other.is_zero() || t.is_zero_dyn(&other.constant_term())? {
            return Ok(Order::Infinite);
        }
        return Ok(Order::Finite(0));
    }
    if !t.is_zero_dyn(&f.constant_term())? || !t.is_zero_dyn(&g.constant_term())? {
        return Ok(Order::Finite(0));
    }
    let common = f.gcd(g)?;
    let (f, g) = if common.total_degree().unwrap_or(0) > 0 {
        if t.is_zero_dyn(&common.constant_term())? {
            return Ok(Order::Infinite);
        }
        (
            f.div_exact(&common)?.expect("gcd divides"),
            g.div_exact(&common)?.expect("gcd divides"),
        )
    } else {
        (f.clone(), g.clone())
    };
    let y = Poly2::y(tower.clone());
    for c in 0..MAX_SHEAR {
        let sx = Poly2::x(tower.clone()).add(&y.scale(&Node::from_int(c)));
        let (fs, gs) = (f.compose(&sx, &y), g.compose(&sx, &y));
        if !y_regular(t, &fs)? || !y_regular(t, &gs)? {
            continue;
        }
        let h = upoly::gcd(t, &fs.restrict_x0(), &gs.restrict_x0())?;
        if h[..h.len() - 1].iter().any(|c| !c.is_zero()) {
            continue;
        }
        return resultant_y(&fs, &gs)?.ord_dyn();
    }
    panic!("no admissible shear found for a coprime pair")
}
