//! End-to-end acceptance checks, one test per criterion.

mod common;

use std::collections::BTreeSet;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use planefol::cuspidal::{
    build_cuspidal, classify_cuspidal, cusp_intersection, cuspidal_gsv, cuspidal_same_reduction, ph_pq,
    pullback_order, toric_pullback,
};
use planefol::foliation::{is_invariant, milnor_number, multiplicity, ph_index, OneForm, SingularityKind};
use planefol::formparse::ParseContext;
use planefol::newton::{newton_polygon, newton_second_type_test, support_form, NewtonPolygon};
use planefol::polyring::{intersection_number, Monomial2, Order, Poly2};
use planefol::reduction::{reduce, same_reduction, verdict, Tangency, DEFAULT_MAX_DEPTH};
use planefol::Error;

fn pts(v: &[(u32, u32)]) -> BTreeSet<Monomial2> {
    v.iter().map(|&(i, j)| Monomial2::new(i, j)).collect()
}

#[test]
fn criterion_01_tangent_saddle_node() {
    let c = ctx();
    let w = form(&c, "(x*y + y^2) dx - x^2 dy");
    let f = poly(&c, "x*y");
    assert_eq!(support_form(&w), pts(&[(2, 1), (1, 2)]));
    assert_eq!(support_form(&OneForm::differential(&f).unwrap()), pts(&[(1, 1)]));
    assert!(!newton_second_type_test(&w, &f).unwrap());
    let tree = reduce(&w, DEFAULT_MAX_DEPTH).unwrap();
    assert_eq!(tree.blowup_count, 1);
    let sn: Vec<_> = tree.saddle_nodes().collect();
    assert_eq!(sn.len(), 1);
    assert_eq!(sn[0].tangency, Some(Tangency::Tangent));
    let nondeg: Vec<_> = tree
        .leaves
        .iter()
        .filter(|l| l.class.kind == SingularityKind::ReducedNonDegenerate)
        .collect();
    assert_eq!(nondeg.len(), 1);
    assert_eq!(tree.leaves.len(), 2);
    let v = verdict(&tree).unwrap();
    assert!(!v.second_type && !v.generalized_curve);
    assert!(same_reduction(&w, &f, DEFAULT_MAX_DEPTH).unwrap().same);
}

#[test]
fn criterion_02_transverse_saddle_node() {
    let c = ctx_b();
    let w = form(&c, "((b-1)*x*y - y^3) dx + (x*y - b*x^2 + x*y^2) dy");
    let f = poly(&c, "x*y*(x - y)");
    let nw = NewtonPolygon::of_form(&w).unwrap();
    let nf = NewtonPolygon::of_form(&OneForm::differential(&f).unwrap()).unwrap();
    assert_eq!(nw.vertices, vec![Monomial2::new(1, 2), Monomial2::new(2, 1)]);
    assert_eq!(nw, nf);
    assert!(newton_second_type_test(&w, &f).unwrap());
    let tree = reduce(&w, DEFAULT_MAX_DEPTH).unwrap();
    assert_eq!(tree.blowup_count, 1);
    assert_eq!(tree.leaves.len(), 3);
    let sn: Vec<_> = tree.saddle_nodes().collect();
    assert_eq!(sn.len(), 1);
    assert_eq!(sn[0].tangency, Some(Tangency::Transverse));
    let v = verdict(&tree).unwrap();
    assert!(v.second_type && !v.generalized_curve);
}

#[test]
fn criterion_03_resonant_family() {
    let c = ctx();
    let x = poly(&c, "x");
    let ndx = NewtonPolygon::of_form(&OneForm::differential(&x).unwrap()).unwrap();
    for n in 1..=3u32 {
        let w = form(&c, &format!("({n}*y + x^{n}) dx - x dy"));
        assert_eq!(support_form(&w), pts(&[(1, 1), (n + 1, 0)]), "n = {n}");
        assert_ne!(NewtonPolygon::of_form(&w).unwrap(), ndx);
        assert!(!newton_second_type_test(&w, &x).unwrap());
        let tree = reduce(&w, DEFAULT_MAX_DEPTH).unwrap();
        assert!(!verdict(&tree).unwrap().second_type, "n = {n}");
    }
}

#[test]
fn criterion_04_cuspidal_table() {
    assert_eq!(ph_pq(2, 3), 2);
    assert_eq!(ph_pq(6, 3), 10);
    let s63 = cusp(6, 3, "x*y");
    assert_eq!(cusp_intersection(&s63).unwrap(), Order::Finite(9));
    assert_eq!(cusp_intersection(&cusp(2, 3, "y")).unwrap(), Order::Finite(3));
    assert!(3 > ph_pq(2, 3) - 1);
    assert_eq!(cusp_intersection(&cusp(2, 3, "0")).unwrap(), Order::Infinite);
    assert_eq!(cusp_intersection(&cusp(6, 3, "0")).unwrap(), Order::Infinite);

    let v = classify_cuspidal(&s63, false).unwrap();
    assert!(v.second_type);
    assert_eq!(v.intersection, Order::Finite(ph_pq(6, 3) - 1));
    assert!(cuspidal_same_reduction(&s63).unwrap());
    let tree = reduce(&build_cuspidal(&s63).unwrap(), DEFAULT_MAX_DEPTH).unwrap();
    assert!(verdict(&tree).unwrap().second_type);

    let s23 = cusp(2, 3, "y");
    let v = classify_cuspidal(&s23, true).unwrap();
    assert_eq!(v.generalized_curve, Some(true));
    let tree = reduce(&build_cuspidal(&s23).unwrap(), DEFAULT_MAX_DEPTH).unwrap();
    assert_eq!(tree.saddle_nodes().count(), 0);
}

#[test]
fn criterion_05_toric_chart() {
    let chart = toric_pullback(&cusp(6, 3, "x*y")).unwrap();
    assert_eq!(chart.points[0].chart.id(), "E[u=0]");
    assert_eq!(chart.points[0].class.eigen_text(), "(-6, 3)");
    let d = 3;
    let mut saw_saddle_node = false;
    for delta in ["x*y", "2*x*y", "x^2 - x*y", "x*y + y^3", "x^2 + x*y", "3*x*y - x^2", "y^3"] {
        let chart = match toric_pullback(&cusp(6, 3, delta)) {
            Ok(c) => c,
            Err(Error::NotSaturated(_)) => continue,
            Err(e) => panic!("{e}"),
        };
        let dt = chart.delta_tilde.clone().expect("polynomial");
        for rec in chart.points.iter().skip(1) {
            let tower = rec.form.tower().clone();
            let point = rec.chart.path[0].point.trim_start_matches("u=").to_string();
            let zeta = ParseContext::with_tower(tower.clone())
                .parse_poly(&point)
                .unwrap()
                .constant_term();
            let at = dt.with_tower(&tower).translate_x(&zeta).constant_term();
            let minus_d = Poly2::from_int_terms(tower.clone(), &[(0, 0, -d)]).constant_term();
            let predicted = at == minus_d;
            let is_sn = matches!(rec.class.kind, SingularityKind::SaddleNode { .. });
            assert_eq!(predicted, is_sn, "Δ = {delta} at u = {point}");
            saw_saddle_node |= is_sn;
        }
    }
    assert!(saw_saddle_node);
}

#[test]
fn criterion_06_intersection_oracle() {
    let deltas = ["x*y", "y", "x", "x + y^2", "x^2*y - y^3", "1 + x", "y^2 - 2*x^3", "3*x*y + y^4", "0", "x^2 - y"];
    let pairs: Vec<(u32, u32)> = (2..=7).flat_map(|p| (2..=p).map(move |q| (p, q))).collect();
    let mut n = 0;
    for (k, &(p, q)) in pairs.iter().enumerate() {
        for j in 0..2 {
            let delta = deltas[(k + 3 * j) % deltas.len()];
            let s = cusp(p, q, delta);
            let by_branches = cusp_intersection(&s).unwrap();
            let by_resultant = intersection_number(&s.delta, &s.separatrix()).unwrap();
            assert_eq!(by_branches, by_resultant, "({p},{q},{delta})");
            assert_eq!(by_branches.finite(), fulton(&s.delta, &s.separatrix()), "({p},{q},{delta})");
            n += 1;
        }
    }
    assert!(n >= 30);
}

#[test]
fn criterion_07_multiplicity_bound() {
    let mut checked = 0;
    for fx in separatrix_fixtures() {
        let tree = reduce(&fx.form, DEFAULT_MAX_DEPTH).unwrap();
        assert!(!tree.dicritical, "{}", fx.name);
        checked += 1;
        assert!(is_invariant(&fx.form, &fx.separatrix).unwrap().0, "{}", fx.name);
        let mw = multiplicity(&fx.form);
        let mf = multiplicity(&OneForm::differential(&fx.separatrix).unwrap());
        assert!(mw >= mf, "{}", fx.name);
        assert_eq!(mw == mf, verdict(&tree).unwrap().second_type, "{}", fx.name);
    }
    assert!(checked >= 15);
}

#[test]
fn criterion_08_pullback_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let fixtures: Vec<Fixture> = separatrix_fixtures()
        .into_iter()
        .filter(|fx| {
            reduce(&fx.form, DEFAULT_MAX_DEPTH)
                .ok()
                .filter(|t| !t.dicritical)
                .is_some_and(|t| verdict(&t).unwrap().second_type)
        })
        .collect();
    assert!(fixtures.iter().any(|f| f.name.starts_with("transverse")));
    assert!(fixtures.iter().any(|f| f.name.starts_with("cusp(6,3")));
    assert!(fixtures.iter().any(|f| f.name.starts_with("saddle-node normal form")));
    let q = ctx();
    for fx in &fixtures {
        let tower = fx.form.tower().clone();
        let df = OneForm::differential(&fx.separatrix).unwrap();
        let mut compared = 0;
        for _ in 0..100 {
            let g = random_arc(&mut rng, &q).with_tower(&tower);
            let (a, b) = (pullback_order(&g, &fx.form).unwrap(), pullback_order(&g, &df).unwrap());
            if a.is_infinite() || b.is_infinite() {
                continue;
            }
            assert_eq!(a, b, "{} along {g}", fx.name);
            compared += 1;
        }
        assert!(compared > 50, "{}", fx.name);
    }
}

#[test]
fn criterion_09_gsv_criterion() {
    let g = cuspidal_gsv(&cusp(2, 3, "1")).unwrap();
    assert_eq!(g.per_branch, vec![-1]);
    let deltas = ["0", "1", "x", "y", "x*y", "x + y", "y^2", "x^2", "x^3 - y", "2*x*y + y^3"];
    let mut certified = 0;
    for p in 2..=5u32 {
        for q in 2..=p {
            if p.gcd(&q) != 1 {
                continue;
            }
            for delta in deltas {
                let s = cusp(p, q, delta);
                let w = match build_cuspidal(&s) {
                    Ok(w) => w,
                    Err(Error::NotSaturated(_)) => continue,
                    Err(e) => panic!("{e}"),
                };
                let tree = match reduce(&w, DEFAULT_MAX_DEPTH) {
                    Ok(t) if !t.dicritical => t,
                    Ok(_) | Err(Error::NotSingular) => continue,
                    Err(e) => panic!("{e}"),
                };
                let gc = verdict(&tree).unwrap().generalized_curve;
                let gsv = cuspidal_gsv(&s).unwrap().total;
                let i = cusp_intersection(&s).unwrap();
                let above = match i {
                    Order::Infinite => true,
                    Order::Finite(n) => n + 1 > ph_pq(p, q),
                };
                assert_eq!(gc, gsv == 0, "({p},{q},{delta}) gsv {gsv}");
                assert_eq!(gc, above, "({p},{q},{delta}) intersection {i}");
                certified += gc as u32;
            }
        }
    }
    assert!(certified > 0);
}

#[test]
fn criterion_10_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..500 {
        let n = rng.gen_range(1..12);
        let support: BTreeSet<Monomial2> = (0..n)
            .map(|_| Monomial2::new(rng.gen_range(0..9), rng.gen_range(0..9)))
            .collect();
        let poly = newton_polygon(&support).unwrap();
        let verts: BTreeSet<Monomial2> = poly.vertices.iter().copied().collect();
        assert_eq!(newton_polygon(&verts).unwrap(), poly);
        assert!(verts.is_subset(&support));
        assert!(support.iter().all(|&m| poly.contains(m)));
    }
    let c = ctx();
    let corpus = [
        "y^2 - x^3",
        "y^3 - x^4",
        "y^2 - x^5",
        "x^3 + y^3",
        "x*y*(x - y)",
        "x^2*y + y^4",
        "x^3*y + y^5",
        "y^4 - x^6",
        "x^4 + x*y^3",
    ];
    for s in corpus {
        let f = poly(&c, s);
        assert_eq!(ph_index(&OneForm::differential(&f).unwrap()).unwrap(), milnor_number(&f).unwrap(), "{s}");
    }
    for p in 2..=7 {
        for q in 2..=p {
            let s = cusp(p, q, "0");
            let w = build_cuspidal(&s).unwrap();
            assert_eq!(ph_index(&w).unwrap(), Order::Finite(ph_pq(p, q)));
            assert_eq!(milnor_number(&s.separatrix()).unwrap(), Order::Finite(ph_pq(p, q)));
        }
    }
    let runs = |w: &OneForm| serde_json::to_string(&reduce(w, DEFAULT_MAX_DEPTH).unwrap().to_json()).unwrap();
    for fx in separatrix_fixtures() {
        assert_eq!(runs(&fx.form), runs(&fx.form), "{}", fx.name);
    }
    let s = cusp(6, 4, "x*y^2 + x^3");
    let a = serde_json::to_string(&classify_cuspidal(&s, true).unwrap()).unwrap();
    let b = serde_json::to_string(&classify_cuspidal(&s, true).unwrap()).unwrap();
    assert_eq!(a, b);
}
