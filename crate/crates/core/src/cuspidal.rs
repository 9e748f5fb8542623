//! The cuspidal family `d(y^p − x^q) + Δ·(p x dy − q y dx)`.

use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::foliation::{classify_singularity, is_invariant, OneForm, SingularityKind};
use crate::numfield::{cyclotomic, upoly, AlgebraicElement, FieldTower, Node, NumError, TowerRef};
use crate::polyring::{intersection_number, Order, Parameterization, Poly1, Poly2};
use crate::reduction::{
    divisor_points, fresh_name, leaf_record, reduce, same_reduction, verdict, Chart, ChartSym, PathStep,
    SingularityRecord, Spot, DEFAULT_MAX_DEPTH,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspidalSpec {
    pub p: u32,
    pub q: u32,
    pub delta: Poly2,
}

impl CuspidalSpec {
    pub fn new(p: u32, q: u32, delta: Poly2) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::Invalid("p and q must be positive".into()));
        }
        Ok(CuspidalSpec { p, q, delta })
    }

    pub fn d(&self) -> u32 {
        self.p.gcd(&self.q)
    }

    pub fn tower(&self) -> &TowerRef {
        self.delta.tower()
    }

    /// `y^p − x^q`.
    pub fn separatrix(&self) -> Poly2 {
        let t = self.tower().clone();
        Poly2::from_int_terms(t, &[(0, self.p, 1), (self.q, 0, -1)])
    }
}

/// `A = −q x^{q−1} − q y Δ`, `B = p y^{p−1} + p x Δ`.
pub fn build_cuspidal(spec: &CuspidalSpec) -> Result<OneForm> {
    let t = spec.tower().clone();
    let (p, q) = (spec.p as i64, spec.q as i64);
    let a = Poly2::from_int_terms(t.clone(), &[(spec.q - 1, 0, -q)])
        .sub(&spec.delta.mul_monomial(0, 1).scale(&Node::from_int(q)));
    let b = Poly2::from_int_terms(t.clone(), &[(0, spec.p - 1, p)])
        .add(&spec.delta.mul_monomial(1, 0).scale(&Node::from_int(p)));
    let g = a.gcd(&b)?;
    if g.total_degree() != Some(0) {
        return Err(Error::NotSaturated(g.to_string()));
    }
    OneForm::new(a, b)
}

/// `(p − 1)(q − 1)`.
pub fn ph_pq(p: u32, q: u32) -> u64 {
    (p as u64).saturating_sub(1) * (q as u64).saturating_sub(1)
}

/// One branch of `y^p − x^q`: its equation `y^{p/d} − ζ^i x^{q/d}` and
/// the arc `(t^{p/d}, ξ^i t^{q/d})`, `ξ` a primitive `p`-th root of unity
/// and `ζ = ξ^{p/d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub equation: Poly2,
    pub gamma: Parameterization,
}

/// `base` extended by a primitive `p`-th root of unity, and that root.
fn root_of_unity_tower(base: &TowerRef, p: u32) -> Result<(TowerRef, Node)> {
    let phi: Vec<Node> = cyclotomic(p).into_iter().map(Node::Rat).collect();
    if phi.len() == 2 {
        return Ok((base.clone(), base.neg(&phi[0])));
    }
    let mut name = "xi".to_string();
    let mut k = 1;
    while base.find(&name).is_some() {
        name = format!("xi{k}");
        k += 1;
    }
    let ext = Arc::new(base.push_unchecked(phi, &name, None));
    let level = ext.height();
    Ok((ext.clone(), ext.generator(level)))
}

fn branches_over(tower: &TowerRef, xi: &Node, p: u32, q: u32) -> Vec<Branch> {
    let d = p.gcd(&q);
    let (pp, qq) = (p / d, q / d);
    let zeta = tower.pow(xi, pp);
    (0..d)
        .map(|i| {
            let zi = tower.pow(&zeta, i);
            let xi_i = tower.pow(xi, i);
            let equation = Poly2::monomial(tower.clone(), crate::polyring::Monomial2::new(0, pp), Node::one()).sub(
                &Poly2::monomial(tower.clone(), crate::polyring::Monomial2::new(qq, 0), zi),
            );
            let gamma = Parameterization::new(
                Poly1::monomial(tower.clone(), pp, Node::one()),
                Poly1::monomial(tower.clone(), qq, xi_i),
            )
            .expect("passes through the origin");
            Branch { equation, gamma }
        })
        .collect()
}

/// The `d = gcd(p, q)` branches of `y^p − x^q` over `base` extended by a
/// primitive `p`-th root of unity.
pub fn branch_params(base: &TowerRef, p: u32, q: u32) -> Result<Vec<Branch>> {
    let (tower, xi) = root_of_unity_tower(base, p)?;
    Ok(branches_over(&tower, &xi, p, q))
}

/// Runs `f` on the branches, moving to a factor of the cyclotomic modulus
/// whenever it turns out to split over `base`.
pub fn with_branches<T>(base: &TowerRef, p: u32, q: u32, mut f: impl FnMut(&[Branch]) -> Result<T>) -> Result<T> {
    let (mut tower, mut xi) = root_of_unity_tower(base, p)?;
    loop {
        let branches = branches_over(&tower, &xi, p, q);
        match f(&branches) {
            Err(Error::Num(NumError::Split(ev))) if ev.level == tower.height() && tower.height() > base.height() => {
                let sub = Arc::new(tower.specialize(ev.level, &ev.factors[0]));
                xi = sub.generator(ev.level);
                tower = sub;
            }
            r => return r,
        }
    }
}

fn arc_degree(gamma: &Parameterization) -> usize {
    gamma.x.degree().unwrap_or(0).max(gamma.y.degree().unwrap_or(0))
}

/// `ord_t` of `series(n) = s(t) mod t^n` for a polynomial `s` of degree
/// `< bound`, doubling `n` until a nonzero term shows up.
fn truncated_order(bound: usize, mut series: impl FnMut(usize) -> Poly1) -> Result<Order> {
    let mut n = 8;
    loop {
        let s = series(n.min(bound));
        match s.ord_dyn()? {
            Order::Infinite if n < bound => n *= 2,
            o => return Ok(o),
        }
    }
}

/// `ord_t f(γ(t))`.
pub fn order_along(f: &Poly2, gamma: &Parameterization) -> Result<Order> {
    let f = f.with_tower(gamma.tower());
    let bound = f.total_degree().unwrap_or(0) as usize * arc_degree(gamma) + 1;
    truncated_order(bound, |n| f.substitute_mod(gamma, n))
}

/// `(Δ, y^p − x^q)₀` as the sum of `ord_t Δ(γ_i)` over the branches,
/// checked against the resultant computation.
pub fn cusp_intersection(spec: &CuspidalSpec) -> Result<Order> {
    let by_branches = with_branches(spec.tower(), spec.p, spec.q, |bs| {
        let mut total = Order::Finite(0);
        for b in bs {
            total = total + order_along(&spec.delta, &b.gamma)?;
        }
        Ok(total)
    })?;
    let by_resultant = intersection_number(&spec.delta, &spec.separatrix())?;
    if by_branches != by_resultant {
        return Err(Error::OracleMismatch(format!(
            "branch sum {by_branches} but resultant {by_resultant}"
        )));
    }
    Ok(by_branches)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    IntersectionCriterion,
    ReductionOracle,
    Gsv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspidalVerdict {
    pub second_type: bool,
    pub generalized_curve: Option<bool>,
    pub intersection: Order,
    pub ph: u64,
    pub method: Method,
}

/// Second-type and generalized-curve verdicts from the intersection number
/// `(Δ, y^p − x^q)₀` compared with `PH − 1`; the reduction oracle confirms
/// them and settles the boundary case.
pub fn classify_cuspidal(spec: &CuspidalSpec, use_reduction_oracle: bool) -> Result<CuspidalVerdict> {
    let w = build_cuspidal(spec)?;
    if !is_invariant(&w, &spec.separatrix())?.0 {
        return Err(Error::NotInvariant);
    }
    let intersection = cusp_intersection(spec)?;
    let ph = ph_pq(spec.p, spec.q);
    let bound = ph as i64 - 1;
    let (ge, gt) = match intersection {
        Order::Infinite => (true, true),
        Order::Finite(n) => (n as i64 >= bound, n as i64 > bound),
    };
    let generalized_curve = if gt || spec.d() == 1 {
        Some(gt)
    } else if !ge {
        Some(false)
    } else {
        None
    };
    let mut out = CuspidalVerdict {
        second_type: ge,
        generalized_curve,
        intersection,
        ph,
        method: Method::IntersectionCriterion,
    };
    if use_reduction_oracle && classify_singularity(&w)?.kind != SingularityKind::Regular {
        let tree = reduce(&w, DEFAULT_MAX_DEPTH)?;
        if tree.dicritical {
            return Err(Error::Dicritical);
        }
        let v = verdict(&tree)?;
        if v.second_type != out.second_type {
            return Err(Error::OracleMismatch(format!(
                "criterion says second type {}, reduction says {}",
                out.second_type, v.second_type
            )));
        }
        match out.generalized_curve {
            Some(g) if g != v.generalized_curve => {
                return Err(Error::OracleMismatch(format!(
                    "criterion says generalized curve {g}, reduction says {}",
                    v.generalized_curve
                )))
            }
            Some(_) => {}
            None => {
                out.generalized_curve = Some(v.generalized_curve);
                out.method = Method::ReductionOracle;
            }
        }
    }
    Ok(out)
}

/// Whether the foliation and `y^p − x^q` have the same reduction.
pub fn cuspidal_same_reduction(spec: &CuspidalSpec) -> Result<bool> {
    let w = build_cuspidal(spec)?;
    Ok(same_reduction(&w, &spec.separatrix(), DEFAULT_MAX_DEPTH)?.same)
}

/// `ord_t B(γ) − ord_t f_y(γ)`, or the same with `A` and `f_x` when `f_y`
/// vanishes on the branch.
pub fn gsv_branch(w: &OneForm, f: &Poly2, gamma: &Parameterization) -> Result<i64> {
    let fy = order_along(&f.dy(), gamma)?;
    let (num, den) = if fy.is_infinite() {
        (order_along(w.a(), gamma)?, order_along(&f.dx(), gamma)?)
    } else {
        (order_along(w.b(), gamma)?, fy)
    };
    match (num, den) {
        (Order::Finite(a), Order::Finite(b)) => Ok(a as i64 - b as i64),
        _ => Err(Error::UndefinedIndex(format!("form or gradient vanishes along {gamma}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gsv {
    pub per_branch: Vec<i64>,
    /// `(f_i, f_j)₀` for `i < j` in lexicographic order.
    pub pairs: Vec<u64>,
    pub total: i64,
}

/// `Σ GSV(ω, f_i) − 2 Σ_{i<j} (f_i, f_j)₀` over the given branches.
pub fn gsv_total(w: &OneForm, branches: &[Branch]) -> Result<Gsv> {
    let mut per_branch = Vec::new();
    for b in branches {
        per_branch.push(gsv_branch(w, &b.equation, &b.gamma)?);
    }
    let mut pairs = Vec::new();
    for i in 0..branches.len() {
        for j in i + 1..branches.len() {
            match intersection_number(&branches[i].equation, &branches[j].equation)? {
                Order::Finite(n) => pairs.push(n),
                Order::Infinite => return Err(Error::Invalid("repeated branch".into())),
            }
        }
    }
    let total = per_branch.iter().sum::<i64>() - 2 * pairs.iter().map(|&n| n as i64).sum::<i64>();
    Ok(Gsv {
        per_branch,
        pairs,
        total,
    })
}

/// GSV index of the cuspidal foliation along `y^p − x^q`.
pub fn cuspidal_gsv(spec: &CuspidalSpec) -> Result<Gsv> {
    let w = build_cuspidal(spec)?;
    with_branches(spec.tower(), spec.p, spec.q, |bs| gsv_total(&w, bs))
}

/// `ord_t γ*ω = ord_t (A(γ)x′ + B(γ)y′)`.
pub fn pullback_order(gamma: &Parameterization, w: &OneForm) -> Result<Order> {
    let tower = gamma.tower().clone();
    let w = w.with_tower(&tower);
    let deg = w.a().total_degree().max(w.b().total_degree()).unwrap_or(0) as usize;
    let bound = (deg + 1) * arc_degree(gamma) + 1;
    let (dx, dy) = (gamma.x.derivative(), gamma.y.derivative());
    truncated_order(bound, |n| {
        w.a()
            .substitute_mod(gamma, n)
            .mul(&dx)
            .add(&w.b().substitute_mod(gamma, n).mul(&dy))
            .truncate(n)
    })
}

/// `x(1 + λ y^p) dy − y^{p+1} dx`.
pub fn saddle_node_normal_form(p: u32, lambda: &AlgebraicElement) -> Result<OneForm> {
    let t = lambda.tower().clone();
    let a = Poly2::from_int_terms(t.clone(), &[(0, p + 1, -1)]);
    let b = Poly2::from_int_terms(t.clone(), &[(1, 0, 1)]).add(&Poly2::monomial(
        t,
        crate::polyring::Monomial2::new(1, p),
        lambda.node().clone(),
    ));
    OneForm::new(a, b)
}

/// The monomial chart `x = u^n v^{p/d}`, `y = u^m v^{q/d}` and the
/// singular points of the pulled-back foliation on `v = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricChart {
    pub m: u32,
    pub n: u32,
    /// `x` and `y` were exchanged to get `p ≥ q`.
    pub swapped: bool,
    /// Exponents `(a, b)` of the monomial `u^a v^b` divided out.
    pub divided_by: (u32, u32),
    pub form: OneForm,
    /// `d·Δ(E)·u^{n+m−nq}·v^{(p+q)/d − pq/d}` when that is a polynomial.
    pub delta_tilde: Option<Poly2>,
    pub points: Vec<SingularityRecord>,
}

/// Least `m ≥ 1` with `q | mp − d`, and `n = (mp − d)/q`.
pub fn toric_exponents(p: u32, q: u32) -> (u32, u32) {
    let d = p.gcd(&q);
    let m = (1..=q).find(|m| (m * p - d).is_multiple_of(q)).expect("p/d is invertible mod q/d");
    (m, (m * p - d) / q)
}

fn common_monomial(ps: &[&Poly2]) -> (u32, u32) {
    let mut a = u32::MAX;
    let mut b = u32::MAX;
    for p in ps {
        for m in p.terms().keys() {
            a = a.min(m.i);
            b = b.min(m.j);
        }
    }
    (if a == u32::MAX { 0 } else { a }, if b == u32::MAX { 0 } else { b })
}

pub fn toric_pullback(spec: &CuspidalSpec) -> Result<ToricChart> {
    let swapped = spec.p < spec.q;
    let (p, q) = if swapped { (spec.q, spec.p) } else { (spec.p, spec.q) };
    let delta = if swapped { spec.delta.swap_xy() } else { spec.delta.clone() };
    // exchanging x and y turns ω_{p,q,Δ} into −ω_{q,p,Δ(y,x)}
    let spec = CuspidalSpec::new(p, q, delta)?;
    let w = build_cuspidal(&spec)?;
    let t = spec.tower().clone();
    let d = spec.d();
    let (pp, qq) = (p / d, q / d);
    let (m, n) = toric_exponents(p, q);
    let mono = |i: u32, j: u32, c: i64| Poly2::from_int_terms(t.clone(), &[(i, j, c)]);
    let ex = mono(n, pp, 1);
    let ey = mono(m, qq, 1);
    let (a, b) = (w.a().compose(&ex, &ey), w.b().compose(&ex, &ey));
    // dx = n u^{n-1} v^P du + P u^n v^{P-1} dv, dy likewise
    let dx_du = if n > 0 { mono(n - 1, pp, n as i64) } else { Poly2::zero(t.clone()) };
    let dx_dv = mono(n, pp - 1, pp as i64);
    let dy_du = mono(m - 1, qq, m as i64);
    let dy_dv = mono(m, qq - 1, qq as i64);
    let cu = a.mul(&dx_du).add(&b.mul(&dy_du));
    let cv = a.mul(&dx_dv).add(&b.mul(&dy_dv));
    let (ea, eb) = common_monomial(&[&cu, &cv]);
    let form = OneForm::new(
        cu.div_monomial(ea, eb).expect("common monomial"),
        cv.div_monomial(ea, eb).expect("common monomial"),
    )?;
    let delta_tilde = {
        let ue = (n + m) as i64 - (n * q) as i64;
        let ve = (pp + qq) as i64 - (p * q / d) as i64;
        let de = spec.delta.compose(&ex, &ey).scale(&Node::from_int(d as i64));
        let up = |p: Poly2, e: i64| if e >= 0 { Some(p.mul_monomial(e as u32, 0)) } else { p.div_monomial((-e) as u32, 0) };
        let vp = |p: Poly2, e: i64| if e >= 0 { Some(p.mul_monomial(0, e as u32)) } else { p.div_monomial(0, (-e) as u32) };
        up(de, ue).and_then(|p| vp(p, ve))
    };
    let points = toric_points(&form, n > 0)?;
    Ok(ToricChart {
        m,
        n,
        swapped,
        divided_by: (ea, eb),
        form,
        delta_tilde,
        points,
    })
}

/// Singular points of `w` on `v = 0`, with `u = 0` exceptional when the
/// chart contracts it.
fn toric_points(w: &OneForm, u_axis_exceptional: bool) -> Result<Vec<SingularityRecord>> {
    let tower = w.tower().clone();
    let t: &FieldTower = &tower;
    let on_axis = upoly::gcd(t, &w.a().restrict_y0(), &w.b().restrict_y0())?;
    let mut out = Vec::new();
    if on_axis.is_empty() {
        return Err(Error::Dicritical);
    }
    let sq = upoly::squarefree_part(t, &on_axis)?;
    let coords = ["u".to_string(), "v".to_string()];
    let chart = |point: String, divisor: [bool; 2]| Chart {
        path: vec![PathStep {
            chart: ChartSym::Toric,
            point,
        }],
        coords: coords.clone(),
        divisor,
    };
    for spot in divisor_points(t, &sq)? {
        match spot {
            Spot::Value(c) => {
                let moved = OneForm::new(w.a().translate_x(&c), w.b().translate_x(&c))?;
                let class = classify_singularity(&moved)?;
                let divisor = [c.is_zero() && u_axis_exceptional, true];
                out.push(leaf_record(chart(format!("u={}", t.fmt_node(&c)), divisor), moved, class, 1));
            }
            Spot::Cluster(modulus) => {
                let name = fresh_name(t);
                cluster_points(w, modulus, &name, &chart, &mut out)?;
            }
        }
    }
    Ok(out)
}

fn cluster_points(
    w: &OneForm,
    modulus: Vec<Node>,
    name: &str,
    chart: &dyn Fn(String, [bool; 2]) -> Chart,
    out: &mut Vec<SingularityRecord>,
) -> Result<()> {
    let tower = w.tower();
    let ext = Arc::new(tower.push_unchecked(modulus, name, None));
    let level = ext.height();
    let mut pending = vec![ext];
    while let Some(tw) = pending.pop() {
        let alpha = tw.generator(level);
        let lifted = w.with_tower(&tw);
        let attempt = (|| -> Result<SingularityRecord> {
            let moved = OneForm::new(lifted.a().translate_x(&alpha), lifted.b().translate_x(&alpha))?;
            let class = classify_singularity(&moved)?;
            let degree = tw.level(level).degree() as u64;
            let point = if degree == 1 {
                format!("u={}", tw.fmt_node(&alpha))
            } else {
                format!("u={name}")
            };
            Ok(leaf_record(chart(point, [false, true]), moved, class, degree))
        })();
        match attempt {
            Ok(r) => out.push(r),
            Err(Error::Num(NumError::Split(ev))) if ev.level == level => {
                // push in reverse so the first factor is handled first
                for f in ev.factors.iter().rev() {
                    pending.push(Arc::new(tw.specialize(level, f)));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
