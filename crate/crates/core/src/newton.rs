//! Supports and Newton polygons of polynomials and 1-forms.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::foliation::{is_invariant, OneForm};
use crate::numfield::Rational;
use crate::polyring::{Monomial2, Poly2};

/// `sop(xA) ∪ sop(yB)`.
pub fn support_form(w: &OneForm) -> BTreeSet<Monomial2> {
    let shift = |p: &Poly2, di: u32, dj: u32| -> Vec<Monomial2> {
        p.terms().keys().map(|m| Monomial2::new(m.i + di, m.j + dj)).collect()
    };
    let mut out: BTreeSet<Monomial2> = shift(w.a(), 1, 0).into_iter().collect();
    out.extend(shift(w.b(), 0, 1));
    out
}

/// A compact side between consecutive vertices. `inclination` is
/// `Δi / −Δj`, positive and strictly increasing along the polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Side {
    pub from: Monomial2,
    pub to: Monomial2,
    #[serde(serialize_with = "ser_rational")]
    pub inclination: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::numfield::fmt_rational(r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    /// Increasing `i`, decreasing `j`.
    pub vertices: Vec<Monomial2>,
    pub compact_sides: Vec<Side>,
}

fn cross(o: Monomial2, a: Monomial2, b: Monomial2) -> i64 {
    let (ax, ay) = (a.i as i64 - o.i as i64, a.j as i64 - o.j as i64);
    let (bx, by) = (b.i as i64 - o.i as i64, b.j as i64 - o.j as i64);
    ax * by - ay * bx
}

/// Boundary of the convex hull of `T + ℝ²≥0`.
pub fn newton_polygon(support: &BTreeSet<Monomial2>) -> Result<NewtonPolygon> {
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    // lowest point of each column that is lower than everything to its left
    let mut stairs: Vec<Monomial2> = Vec::new();
    for m in support {
        if stairs.last().is_none_or(|l| m.j < l.j) {
            stairs.push(*m);
        }
    }
    let mut hull: Vec<Monomial2> = Vec::new();
    for p in stairs {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let compact_sides = hull
        .windows(2)
        .map(|w| Side {
            from: w[0],
            to: w[1],
            inclination: Rational::new(
                BigInt::from(w[1].i - w[0].i),
                BigInt::from(w[0].j - w[1].j),
            ),
        })
        .collect();
    Ok(NewtonPolygon {
        vertices: hull,
        compact_sides,
    })
}

impl NewtonPolygon {
    pub fn of_poly(f: &Poly2) -> Result<Self> {
        newton_polygon(&f.support())
    }

    pub fn of_form(w: &OneForm) -> Result<Self> {
        newton_polygon(&support_form(w))
    }

    /// Whether `m` lies in `D(T)`, the region on or above the polygon.
    pub fn contains(&self, m: Monomial2) -> bool {
        let first = self.vertices[0];
        let last = *self.vertices.last().expect("nonempty");
        if m.i < first.i || m.j < last.j {
            return false;
        }
        self.vertices.windows(2).all(|w| cross(w[0], w[1], m) >= 0)
    }

    /// `[[i, j], ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.vertices).expect("serializable")
    }

    /// Lattice picture: `o` vertices, `*` other support points.
    pub fn render_ascii(&self, support: &BTreeSet<Monomial2>) -> String {
        let max_i = support.iter().map(|m| m.i).max().unwrap_or(0) + 1;
        let max_j = support.iter().map(|m| m.j).max().unwrap_or(0) + 1;
        let width = max_j.to_string().len();
        let mut out = String::new();
        for j in (0..=max_j).rev() {
            let _ = write!(out, "{j:>width$} |");
            for i in 0..=max_i {
                let m = Monomial2::new(i, j);
                let c = if self.vertices.contains(&m) {
                    'o'
                } else if support.contains(&m) {
                    '*'
                } else {
                    '.'
                };
                let _ = write!(out, " {c}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{:>width$} +{}", "", "--".repeat(max_i as usize + 1));
        let _ = write!(out, "{:>width$}  ", "");
        for i in 0..=max_i {
            let _ = write!(out, " {}", i % 10);
        }
        out.push('\n');
        out
    }

    /// SVG with 20 units per lattice cell.
    pub fn render_svg(&self, support: &BTreeSet<Monomial2>) -> String {
        const CELL: u32 = 20;
        const PAD: u32 = 20;
        let max_i = support.iter().map(|m| m.i).max().unwrap_or(0) + 1;
        let max_j = support.iter().map(|m| m.j).max().unwrap_or(0) + 1;
        let (w, h) = (2 * PAD + CELL * max_i, 2 * PAD + CELL * max_j);
        let px = |i: u32| PAD + CELL * i;
        let py = |j: u32| PAD + CELL * (max_j - j);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        );
        for i in 0..=max_i {
            let _ = writeln!(
                s,
                r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#ddd"/>"##,
                py(max_j),
                py(0),
                x = px(i)
            );
        }
        for j in 0..=max_j {
            let _ = writeln!(
                s,
                r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#ddd"/>"##,
                px(0),
                px(max_i),
                y = py(j)
            );
        }
        let first = self.vertices[0];
        let last = *self.vertices.last().expect("nonempty");
        let mut pts = vec![format!("{},{}", px(first.i), py(max_j))];
        pts.extend(self.vertices.iter().map(|v| format!("{},{}", px(v.i), py(v.j))));
        pts.push(format!("{},{}", px(max_i), py(last.j)));
        let _ = writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#1f4e99" stroke-width="2"/>"##,
            pts.join(" ")
        );
        for m in support {
            let _ = writeln!(s, r##"<circle cx="{}" cy="{}" r="3" fill="#444"/>"##, px(m.i), py(m.j));
        }
        for v in &self.vertices {
            let _ = writeln!(s, r##"<circle cx="{}" cy="{}" r="5" fill="#c0392b"/>"##, px(v.i), py(v.j));
        }
        s.push_str("</svg>\n");
        s
    }
}

pub fn polygon_equal(p: &NewtonPolygon, q: &NewtonPolygon) -> bool {
    p.vertices == q.vertices
}

/// Compares `𝒩(ω)` with `𝒩(df)` for an invariant curve `f`.
pub fn newton_second_type_test(w: &OneForm, f: &Poly2) -> Result<bool> {
    if !is_invariant(w, f)?.0 {
        return Err(Error::NotInvariant);
    }
    let df = OneForm::differential(f)?;
    Ok(polygon_equal(
        &NewtonPolygon::of_form(w)?,
        &NewtonPolygon::of_form(&df)?,
    ))
}
