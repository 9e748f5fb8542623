//! Point blow-ups and reduction of singularities with a full record of
//! centers and final singular points.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::foliation::{
    classify_singularity, is_invariant, multiplicity, saturate, OneForm, SingularityClass, SingularityKind,
};
use crate::numfield::{rational_roots, upoly, FieldTower, Node, NumError, TowerRef};
use crate::polyring::Poly2;

pub const DEFAULT_MAX_DEPTH: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ChartSym {
    C1,
    C2,
    /// Monomial chart of a weighted blow-up.
    Toric,
}

impl fmt::Display for ChartSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChartSym::C1 => "C1",
            ChartSym::C2 => "C2",
            ChartSym::Toric => "E",
        })
    }
}

/// One blow-up followed by a choice of point on the new divisor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathStep {
    pub chart: ChartSym,
    /// Coordinate of the point along the divisor, e.g. `t=0` or `t=w1`.
    pub point: String,
}

/// Local chart around a point: coordinates `(u, v)` centered at it and
/// which of the axes `u = 0`, `v = 0` are exceptional components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub path: Vec<PathStep>,
    pub coords: [String; 2],
    pub divisor: [bool; 2],
}

impl Chart {
    pub(crate) fn root() -> Self {
        Chart {
            path: Vec::new(),
            coords: ["x".into(), "y".into()],
            divisor: [false, false],
        }
    }

    pub fn id(&self) -> String {
        if self.path.is_empty() {
            return "root".into();
        }
        self.path
            .iter()
            .map(|s| format!("{}[{}]", s.chart, s.point))
            .collect::<Vec<_>>()
            .join("/")
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }

    /// Local equations of exceptional components through the point.
    pub fn divisor_branches(&self) -> Vec<String> {
        (0..2)
            .filter(|&k| self.divisor[k])
            .map(|k| format!("{} = 0", self.coords[k]))
            .collect()
    }

    pub fn is_corner(&self) -> bool {
        self.divisor[0] && self.divisor[1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tangency {
    Tangent,
    Transverse,
}

impl fmt::Display for Tangency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tangency::Tangent => "tangent",
            Tangency::Transverse => "transverse",
        })
    }
}

/// A reduced singular point of the final foliation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityRecord {
    pub chart: Chart,
    pub form: OneForm,
    pub class: SingularityClass,
    pub on_corner: bool,
    pub tangency: Option<Tangency>,
    /// Number of conjugate points this record stands for.
    pub multiplicity: u64,
}

/// A blown-up point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Center {
    pub chart: Chart,
    pub form: OneForm,
    pub class: SingularityClass,
    pub order: u64,
    pub multiplicity: u64,
    pub dicritical: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTree {
    pub root: OneForm,
    pub centers: Vec<Center>,
    pub leaves: Vec<SingularityRecord>,
    pub blowup_count: u64,
    pub dicritical: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub second_type: bool,
    pub generalized_curve: bool,
}

/// Strict transforms of one blow-up at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUp {
    /// In `(x, t)` with `y = t·x`.
    pub chart1: OneForm,
    /// In `(s, y)` with `x = s·y`.
    pub chart2: OneForm,
    /// Power of the divisor equation factored out of the total transform.
    pub exceptional_exponent: u64,
    pub dicritical: bool,
}

/// `x·A_ν + y·B_ν ≡ 0` for the initial parts of degree `ν = mult(ω)`.
pub fn is_dicritical(w: &OneForm) -> Result<bool> {
    let nu = multiplicity(w) as u32;
    let radial = w
        .a()
        .homogeneous_part(nu)
        .mul_monomial(1, 0)
        .add(&w.b().homogeneous_part(nu).mul_monomial(0, 1));
    for c in radial.terms().values() {
        if !w.tower().is_zero_dyn(c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn blowup(w: &OneForm) -> Result<BlowUp> {
    let nu = multiplicity(w) as u32;
    let dicritical = is_dicritical(w)?;
    let t = w.tower().clone();
    let (x, y) = (Poly2::x(t.clone()), Poly2::y(t.clone()));
    let xy = x.mul(&y);
    let c1 = |p: &Poly2| p.compose(&x, &xy).div_monomial(nu, 0).expect("order at least ν");
    let (a, b) = (c1(w.a()), c1(w.b()));
    let chart1 = saturate(&a.add(&b.mul_monomial(0, 1)), &b.mul_monomial(1, 0))?;
    let c2 = |p: &Poly2| p.compose(&xy, &y).div_monomial(0, nu).expect("order at least ν");
    let (a, b) = (c2(w.a()), c2(w.b()));
    let chart2 = saturate(&a.mul_monomial(0, 1), &a.mul_monomial(1, 0).add(&b))?;
    Ok(BlowUp {
        chart1,
        chart2,
        exceptional_exponent: nu as u64 + dicritical as u64,
        dicritical,
    })
}

/// Strict transform of a curve in both charts.
pub fn blowup_curve(g: &Poly2) -> (Poly2, Poly2) {
    let m = g.total_order().finite().unwrap_or(0) as u32;
    let t = g.tower().clone();
    let (x, y) = (Poly2::x(t.clone()), Poly2::y(t.clone()));
    let xy = x.mul(&y);
    (
        g.compose(&x, &xy).div_monomial(m, 0).expect("order m"),
        g.compose(&xy, &y).div_monomial(0, m).expect("order m"),
    )
}

#[derive(Clone)]
struct Frame {
    form: OneForm,
    curve: Option<Poly2>,
    chart: Chart,
    multiplicity: u64,
}

impl Frame {
    fn with_tower(&self, tower: &TowerRef) -> Frame {
        Frame {
            form: self.form.with_tower(tower),
            curve: self.curve.as_ref().map(|c| c.with_tower(tower)),
            chart: self.chart.clone(),
            multiplicity: self.multiplicity,
        }
    }
}

/// Curve check at a point: strict transform absent, or smooth, off
/// corners and transverse to the divisor.
fn curve_nc(g: &Poly2, chart: &Chart) -> Result<bool> {
    let t = g.tower();
    if !t.is_zero_dyn(&g.constant_term())? {
        return Ok(true);
    }
    if chart.is_corner() {
        return Ok(false);
    }
    let (gu, gv) = (g.coeff(1, 0), g.coeff(0, 1));
    let (zu, zv) = (t.is_zero_dyn(&gu)?, t.is_zero_dyn(&gv)?);
    if zu && zv {
        return Ok(false);
    }
    if chart.divisor[0] && zv {
        return Ok(false);
    }
    if chart.divisor[1] && zu {
        return Ok(false);
    }
    Ok(true)
}

#[derive(Default)]
struct Output {
    centers: Vec<Center>,
    leaves: Vec<SingularityRecord>,
    dicritical: bool,
    /// Chart ids where the curve and foliation disagree on blowing up:
    /// (foliation blows up, curve does not) and the reverse.
    extra_foliation: Vec<String>,
    extra_curve: Vec<String>,
}

impl Output {
    fn append(&mut self, other: Output) {
        self.centers.extend(other.centers);
        self.leaves.extend(other.leaves);
        self.dicritical |= other.dicritical;
        self.extra_foliation.extend(other.extra_foliation);
        self.extra_curve.extend(other.extra_curve);
    }
}

struct Engine {
    max_depth: u32,
}

pub(crate) fn fresh_name(t: &FieldTower) -> String {
    (1..)
        .map(|k| format!("w{k}"))
        .find(|n| t.find(n).is_none() && !["x", "y", "t"].contains(&n.as_str()))
        .expect("unbounded")
}

pub(crate) enum Spot {
    Value(Node),
    Cluster(Vec<Node>),
}

impl Engine {
    fn process(&self, frame: Frame, out: &mut Output) -> Result<()> {
        let class = classify_singularity(&frame.form)?;
        let curve_ok = match &frame.curve {
            Some(g) => Some(curve_nc(g, &frame.chart)?),
            None => None,
        };
        if class.is_reduced() {
            if matches!(class.kind, SingularityKind::Regular) {
                if curve_ok == Some(false) {
                    out.extra_curve.push(frame.chart.id());
                }
                return Ok(());
            }
            if curve_ok == Some(false) {
                out.extra_curve.push(frame.chart.id());
            }
            out.leaves.push(leaf_record(frame.chart, frame.form, class, frame.multiplicity));
            return Ok(());
        }
        if curve_ok == Some(true) {
            out.extra_foliation.push(frame.chart.id());
        }
        if frame.chart.depth() as u32 >= self.max_depth {
            return Err(Error::DepthExceeded(self.max_depth));
        }
        let b = blowup(&frame.form)?;
        out.centers.push(Center {
            chart: frame.chart.clone(),
            form: frame.form.clone(),
            class,
            order: multiplicity(&frame.form),
            multiplicity: frame.multiplicity,
            dicritical: b.dicritical,
        });
        if b.dicritical {
            out.dicritical = true;
            return Ok(());
        }
        let curves = frame.curve.as_ref().map(blowup_curve);
        let depth = frame.chart.depth() + 1;
        let tower = frame.form.tower().clone();
        let t: &FieldTower = &tower;

        // chart 1: every point of u = 0 at finite t
        let p = upoly::squarefree_part(t, &b.chart1.a().restrict_x0())?;
        for spot in divisor_points(t, &p)? {
            let coords = [format!("x{depth}"), format!("t{depth}")];
            match spot {
                Spot::Value(c) => {
                    let divisor = [true, c.is_zero() && frame.chart.divisor[1]];
                    let point = format!("t={}", t.fmt_node(&c));
                    let child = Frame {
                        form: OneForm::new(b.chart1.a().translate_y(&c), b.chart1.b().translate_y(&c))?,
                        curve: curves.as_ref().map(|(g1, _)| g1.translate_y(&c)),
                        chart: child_chart(&frame.chart, ChartSym::C1, point, coords, divisor),
                        multiplicity: frame.multiplicity,
                    };
                    self.process(child, out)?;
                }
                Spot::Cluster(modulus) => {
                    let name = fresh_name(t);
                    let ext = std::sync::Arc::new(t.push_unchecked(modulus, &name, None));
                    let level = ext.height();
                    let alpha = ext.generator(level);
                    let chart = child_chart(
                        &frame.chart,
                        ChartSym::C1,
                        format!("t={name}"),
                        coords,
                        [true, false],
                    );
                    let lifted = Frame {
                        form: b.chart1.with_tower(&ext),
                        curve: curves.as_ref().map(|(g1, _)| g1.with_tower(&ext)),
                        chart,
                        multiplicity: frame.multiplicity,
                    };
                    self.process_cluster(lifted, level, alpha, frame.multiplicity, out)?;
                }
            }
        }

        // chart 2: only s = 0
        let coords = [format!("s{depth}"), format!("y{depth}")];
        let child = Frame {
            form: b.chart2.clone(),
            curve: curves.map(|(_, g2)| g2),
            chart: child_chart(
                &frame.chart,
                ChartSym::C2,
                "s=0".into(),
                coords,
                [frame.chart.divisor[0], true],
            ),
            multiplicity: frame.multiplicity,
        };
        self.process(child, out)
    }

    /// Runs a conjugate family of points `t = α`, `m(α) = 0`, forking when
    /// the modulus of `α` turns out to be reducible.
    fn process_cluster(
        &self,
        frame: Frame,
        level: usize,
        alpha: Node,
        base_multiplicity: u64,
        out: &mut Output,
    ) -> Result<()> {
        let tower = frame.form.tower().clone();
        let degree = tower.level(level).degree() as u64;
        let point = Frame {
            form: OneForm::new(frame.form.a().translate_y(&alpha), frame.form.b().translate_y(&alpha))?,
            curve: frame.curve.as_ref().map(|g| g.translate_y(&alpha)),
            chart: frame.chart.clone(),
            multiplicity: base_multiplicity * degree,
        };
        let mut local = Output::default();
        match self.process(point, &mut local) {
            Ok(()) => {
                out.append(local);
                Ok(())
            }
            Err(Error::Num(NumError::Split(ev))) if ev.level == level => {
                for factor in ev.factors.iter() {
                    let sub = std::sync::Arc::new(tower.specialize(level, factor));
                    let mut f = frame.with_tower(&sub);
                    let alpha = sub.generator(level);
                    if let Some(step) = f.chart.path.last_mut() {
                        let name = &sub.level(level).name;
                        step.point = if factor.len() == 2 {
                            format!("t={}", sub.fmt_node(&alpha))
                        } else {
                            format!("t={name}")
                        };
                    }
                    self.process_cluster(f, level, alpha, base_multiplicity, out)?;
                }
                Ok(())
            }
            Err(e) => Err(e),
        }
    }
}

pub(crate) fn leaf_record(chart: Chart, form: OneForm, class: SingularityClass, multiplicity: u64) -> SingularityRecord {
    let tangency = match &class.kind {
        SingularityKind::SaddleNode { weak_direction: (wu, wv) } => {
            let tangent = (chart.divisor[0] && wu.is_zero()) || (chart.divisor[1] && wv.is_zero());
            Some(if tangent { Tangency::Tangent } else { Tangency::Transverse })
        }
        _ => None,
    };
    SingularityRecord {
        on_corner: chart.is_corner(),
        chart,
        form,
        class,
        tangency,
        multiplicity,
    }
}

pub(crate) fn child_chart(parent: &Chart, chart: ChartSym, point: String, coords: [String; 2], divisor: [bool; 2]) -> Chart {
    let mut path = parent.path.clone();
    path.push(PathStep { chart, point });
    Chart { path, coords, divisor }
}

/// Roots of a monic squarefree `p`: `0` first, then rational roots in
/// increasing order, then a root in the tower or one conjugate cluster.
pub(crate) fn divisor_points(t: &FieldTower, p: &[Node]) -> Result<Vec<Spot>> {
    let mut out = Vec::new();
    if upoly::degree(p).unwrap_or(0) == 0 {
        return Ok(out);
    }
    let mut rest = p.to_vec();
    if t.is_zero_dyn(&rest[0])? {
        out.push(Spot::Value(Node::zero()));
        rest.remove(0);
    }
    if rest.iter().all(|c| c.as_rational().is_some()) {
        let q: Vec<_> = rest.iter().map(|c| c.as_rational().cloned().expect("rational")).collect();
        for r in rational_roots(&q) {
            let root = Node::Rat(r);
            let (quot, rem) = upoly::divrem(t, &rest, &[t.neg(&root), Node::one()])?;
            debug_assert!(rem.is_empty());
            rest = quot;
            out.push(Spot::Value(root));
        }
    }
    match upoly::degree(&rest).unwrap_or(0) {
        0 => {}
        1 => {
            let monic = upoly::monic(t, &rest)?;
            out.push(Spot::Value(t.neg(&monic[0])));
        }
        _ => out.push(Spot::Cluster(upoly::monic(t, &rest)?)),
    }
    Ok(out)
}

/// Reduction of singularities of a saturated form singular at the origin.
pub fn reduce(w: &OneForm, max_depth: u32) -> Result<ReductionTree> {
    let out = run(w, None, max_depth)?;
    Ok(tree_from(w, out))
}

fn run(w: &OneForm, curve: Option<&Poly2>, max_depth: u32) -> Result<Output> {
    if !w.is_saturated()? {
        let g = w.a().gcd(w.b())?;
        return Err(Error::NotSaturated(g.to_string()));
    }
    if classify_singularity(w)?.kind == SingularityKind::Regular {
        return Err(Error::NotSingular);
    }
    let engine = Engine { max_depth };
    let mut out = Output::default();
    engine.process(
        Frame {
            form: w.clone(),
            curve: curve.cloned(),
            chart: Chart::root(),
            multiplicity: 1,
        },
        &mut out,
    )?;
    Ok(out)
}

fn tree_from(w: &OneForm, out: Output) -> ReductionTree {
    let blowup_count = out
        .centers
        .iter()
        .filter(|c| !c.dicritical)
        .map(|c| c.multiplicity)
        .sum();
    ReductionTree {
        root: w.clone(),
        centers: out.centers,
        leaves: out.leaves,
        blowup_count,
        dicritical: out.dicritical,
    }
}

pub fn verdict(tree: &ReductionTree) -> Result<Verdict> {
    if tree.dicritical {
        return Err(Error::Truncated);
    }
    let saddle_nodes = tree.leaves.iter().filter(|l| l.tangency.is_some());
    let mut generalized_curve = true;
    let mut second_type = true;
    for l in saddle_nodes {
        generalized_curve = false;
        if l.tangency == Some(Tangency::Tangent) {
            second_type = false;
        }
    }
    Ok(Verdict {
        second_type,
        generalized_curve,
    })
}

/// Outcome of comparing the reduction of a foliation with the embedded
/// resolution of an invariant curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SameReduction {
    pub same: bool,
    /// Centers blown up for the foliation where the curve is already in
    /// normal crossings.
    pub foliation_only: Vec<String>,
    /// Points where the curve still needs blowing up but the foliation is
    /// reduced.
    pub curve_only: Vec<String>,
}

/// Compares the blow-up centers of the reduction of `w` with those of the
/// embedded resolution of `f`, walking both along the foliation's tree.
pub fn same_reduction(w: &OneForm, f: &Poly2, max_depth: u32) -> Result<SameReduction> {
    if !is_invariant(w, f)?.0 {
        return Err(Error::NotInvariant);
    }
    let out = run(w, Some(f), max_depth)?;
    if out.dicritical {
        return Err(Error::Dicritical);
    }
    Ok(SameReduction {
        same: out.extra_foliation.is_empty() && out.extra_curve.is_empty(),
        foliation_only: out.extra_foliation,
        curve_only: out.extra_curve,
    })
}

fn class_json(c: &SingularityClass) -> Value {
    let mut v = json!({
        "tag": c.tag(),
        "trace": c.trace.to_string(),
        "det": c.det.to_string(),
        "eigenvalues": c.eigenvalues.as_ref().map(|(l, m)| vec![l.to_string(), m.to_string()]),
    });
    match &c.kind {
        SingularityKind::SaddleNode { weak_direction: (a, b) } => {
            v["weak_direction"] = json!([a.to_string(), b.to_string()]);
        }
        SingularityKind::NonReduced(k) => v["subtag"] = json!(k),
        _ => {}
    }
    v
}

fn chart_json(c: &Chart) -> Value {
    json!({
        "id": c.id(),
        "coords": c.coords,
        "divisor_branches": c.divisor_branches(),
    })
}

impl ReductionTree {
    pub fn saddle_nodes(&self) -> impl Iterator<Item = &SingularityRecord> {
        self.leaves.iter().filter(|l| l.tangency.is_some())
    }

    pub fn to_json(&self) -> Value {
        let centers: Vec<Value> = self
            .centers
            .iter()
            .map(|c| {
                json!({
                    "chart": chart_json(&c.chart),
                    "form": c.form.fmt_with(&c.chart.coords[0], &c.chart.coords[1]),
                    "class": class_json(&c.class),
                    "order": c.order,
                    "multiplicity": c.multiplicity,
                    "dicritical": c.dicritical,
                    "tower": c.form.tower().declarations(),
                })
            })
            .collect();
        let leaves: Vec<Value> = self
            .leaves
            .iter()
            .map(|l| {
                json!({
                    "chart": chart_json(&l.chart),
                    "form": l.form.fmt_with(&l.chart.coords[0], &l.chart.coords[1]),
                    "class": class_json(&l.class),
                    "on_corner": l.on_corner,
                    "tangency": l.tangency,
                    "multiplicity": l.multiplicity,
                    "tower": l.form.tower().declarations(),
                })
            })
            .collect();
        json!({
            "root": self.root.to_string(),
            "blowup_count": self.blowup_count,
            "dicritical": self.dicritical,
            "centers": centers,
            "leaves": leaves,
        })
    }

    /// Graphviz rendering; tangent saddle-nodes are filled red.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph reduction {\n  node [shape=box, fontname=\"monospace\"];\n");
        let quote = |x: &str| x.replace('"', "\\\"");
        for c in &self.centers {
            let id = c.chart.id();
            let label = format!(
                "{}\\nblow-up, order {}{}{}",
                id,
                c.order,
                if c.multiplicity > 1 { format!(", x{}", c.multiplicity) } else { String::new() },
                if c.dicritical { "\\ndicritical" } else { "" }
            );
            s.push_str(&format!("  \"{}\" [label=\"{}\", shape=ellipse];\n", quote(&id), quote(&label)));
        }
        for l in &self.leaves {
            let id = l.chart.id();
            let mut label = format!("{}\\n{} {}", id, l.class.tag(), l.class.eigen_text());
            if let Some(t) = l.tangency {
                label.push_str(&format!("\\n{t}"));
            }
            let style = if l.tangency == Some(Tangency::Tangent) {
                ", style=filled, fillcolor=\"#f4a6a6\""
            } else {
                ""
            };
            s.push_str(&format!("  \"{}\" [label=\"{}\"{}];\n", quote(&id), quote(&label), style));
        }
        let all = self.centers.iter().map(|c| &c.chart).chain(self.leaves.iter().map(|l| &l.chart));
        for chart in all {
            if chart.path.is_empty() {
                continue;
            }
            let parent = Chart {
                path: chart.path[..chart.path.len() - 1].to_vec(),
                coords: chart.coords.clone(),
                divisor: chart.divisor,
            };
            s.push_str(&format!("  \"{}\" -> \"{}\";\n", quote(&parent.id()), quote(&chart.id())));
        }
        s.push_str("}\n");
        s
    }
}
