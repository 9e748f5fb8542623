#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use planefol::cuspidal::{build_cuspidal, CuspidalSpec};
use planefol::foliation::OneForm;
use planefol::formparse::ParseContext;
use planefol::numfield::Node;
use planefol::polyring::{Parameterization, Poly1, Poly2};

pub fn ctx() -> ParseContext {
    ParseContext::new()
}

/// Context with `b = √2`.
pub fn ctx_b() -> ParseContext {
    let mut c = ParseContext::new();
    c.declare("b: b^2 - 2 ~ 1.414").unwrap();
    c
}

pub fn form(c: &ParseContext, s: &str) -> OneForm {
    c.parse_oneform(s).unwrap()
}

pub fn poly(c: &ParseContext, s: &str) -> Poly2 {
    c.parse_poly(s).unwrap()
}

pub fn cusp(p: u32, q: u32, delta: &str) -> CuspidalSpec {
    CuspidalSpec::new(p, q, poly(&ctx(), delta)).unwrap()
}

/// A foliation together with the product of all its separatrices.
pub struct Fixture {
    pub name: String,
    pub form: OneForm,
    pub separatrix: Poly2,
}

pub fn fixture(name: &str, c: &ParseContext, w: &str, f: &str) -> Fixture {
    Fixture {
        name: name.to_string(),
        form: form(c, w),
        separatrix: poly(c, f),
    }
}

pub fn cusp_fixture(p: u32, q: u32, delta: &str) -> Fixture {
    let s = cusp(p, q, delta);
    Fixture {
        name: format!("cusp({p},{q},{delta})"),
        form: build_cuspidal(&s).unwrap(),
        separatrix: s.separatrix(),
    }
}

/// Non-dicritical fixtures with known separatrix union.
pub fn separatrix_fixtures() -> Vec<Fixture> {
    let c = ctx();
    let mut v = vec![
        fixture("tangent saddle-node", &c, "(x*y + y^2) dx - x^2 dy", "x*y"),
        fixture(
            "transverse saddle-node",
            &ctx_b(),
            "((b-1)*x*y - y^3) dx + (x*y - b*x^2 + x*y^2) dy",
            "x*y*(x - y)",
        ),
        fixture("cusp", &c, "-3*x^2 dx + 2*y dy", "y^2 - x^3"),
        fixture("node", &c, "y dx + x dy", "x*y"),
        fixture("irrational saddle", &ctx_b(), "b*y dx + x dy", "x*y"),
        fixture("saddle-node normal form", &c, "-y^2 dx + x*(1 + 3*y) dy", "x*y"),
        fixture("saddle-node normal form p=2", &c, "-y^3 dx + x*(1 - y^2) dy", "x*y"),
        fixture("three lines", &c, "(3*x^2*y - y^3) dx + (x^3 - 3*x*y^2) dy", "x*y*(x^2 - y^2)"),
    ];
    for n in 1..=3 {
        v.push(fixture(
            &format!("resonant n={n}"),
            &c,
            &format!("({n}*y + x^{n}) dx - x dy"),
            "x",
        ));
    }
    for (p, q, d) in [(6, 3, "x*y"), (2, 3, "y"), (2, 3, "x"), (3, 4, "y^2"), (2, 5, "x^2")] {
        v.push(cusp_fixture(p, q, d));
    }
    v
}

type QPoly = BTreeMap<(u32, u32), BigRational>;

fn to_map(f: &Poly2) -> QPoly {
    f.terms()
        .iter()
        .map(|(m, c)| match c {
            Node::Rat(r) => ((m.i, m.j), r.clone()),
            _ => panic!("oracle works over the rationals"),
        })
        .collect()
}

fn on_axis(f: &QPoly) -> BTreeMap<u32, BigRational> {
    f.iter().filter(|((_, j), _)| *j == 0).map(|((i, _), c)| (*i, c.clone())).collect()
}

fn combine(a: &BigRational, f: &QPoly, b: &BigRational, g: &QPoly, shift: u32) -> QPoly {
    let mut out: QPoly = f.iter().map(|(m, c)| (*m, a * c)).collect();
    for ((i, j), c) in g {
        let e = out.entry((i + shift, *j)).or_insert_with(BigRational::zero);
        *e -= b * c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `(f, g)₀` by Fulton's algorithm; `None` when `f` and `g` share a
/// component through the origin.
pub fn fulton(f: &Poly2, g: &Poly2) -> Option<u64> {
    if f.is_zero() || g.is_zero() {
        return None;
    }
    let h = f.gcd(g).unwrap();
    if h.total_degree() != Some(0) && h.constant_term().is_zero() {
        return None;
    }
    let (mut f, mut g) = (to_map(f), to_map(g));
    let mut acc = 0;
    for _ in 0..10_000 {
        if f.contains_key(&(0, 0)) || g.contains_key(&(0, 0)) {
            return Some(acc);
        }
        if f.is_empty() || g.is_empty() {
            return None;
        }
        let (rf, rg) = (on_axis(&f), on_axis(&g));
        match (rf.keys().next_back().copied(), rg.keys().next_back().copied()) {
            (None, None) => return None,
            (Some(_), None) => std::mem::swap(&mut f, &mut g),
            (None, Some(_)) => {
                acc += *rg.keys().next().unwrap() as u64;
                f = f.into_iter().map(|((i, j), c)| ((i, j - 1), c)).collect();
            }
            (Some(r), Some(s)) if r > s => std::mem::swap(&mut f, &mut g),
            (Some(r), Some(s)) => g = combine(&rf[&r], &g, &rg[&s], &f, s - r),
        }
    }
    panic!("no termination")
}

/// Random arc through the origin with both components nonzero.
pub fn random_arc(rng: &mut ChaCha8Rng, c: &ParseContext) -> Parameterization {
    loop {
        let mut comp = || {
            let coeffs: Vec<i64> = (0..5)
                .map(|k| if k == 0 { 0 } else { rng.gen_range(-3..=3) })
                .collect();
            Poly1::from_ints(c.tower().clone(), &coeffs)
        };
        let (x, y) = (comp(), comp());
        if x.is_zero() || y.is_zero() {
            continue;
        }
        if let Some(g) = Parameterization::new(x, y) {
            return g;
        }
    }
}
