use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use ruledinc::forge::{InstanceSpec, SurfaceSpec};
use ruledinc::genproj::project_vector;
use ruledinc::incidence::{count_incidences, lines_per_point, max_lines_per_flat, points_per_line, rhs_main};
use ruledinc::instance::Instance;
use ruledinc::linespace::{
    coplanar_triple, klein_form, line_relation, plane_line_intersection, plucker_from_points, AffLine, Flat2, FlatH,
    LineRelation, ProjPoint,
};
use ruledinc::poly::{divides, gcd};
use ruledinc::{forge, Poly, Rat};

fn rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

fn small() -> impl Strategy<Value = Rat> {
    (-3i64..=3).prop_map(|n| Rat::from_integer(BigInt::from(n)))
}

fn vec3() -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(rat(), 3)
}

fn grid3() -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(small(), 3)
}

fn line() -> impl Strategy<Value = AffLine> {
    (vec3(), vec3()).prop_filter_map("zero direction", |(b, d)| AffLine::new(b, d).ok())
}

/// Lines through small integer points, so coincidences actually happen.
fn grid_line() -> impl Strategy<Value = AffLine> {
    (grid3(), grid3()).prop_filter_map("equal points", |(p, q)| AffLine::through(&p, &q).ok())
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..=2, 3), -4i64..=4), 1..5).prop_map(|terms| {
        Poly::from_terms(
            3,
            terms.into_iter().map(|(e, c)| (e, Rat::from_integer(BigInt::from(c)))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn klein_form_vanishes(a in prop::collection::vec(rat(), 4), b in prop::collection::vec(rat(), 4)) {
        if let (Ok(x), Ok(y)) = (ProjPoint::new(a), ProjPoint::new(b)) {
            if let Ok(l) = plucker_from_points(&x, &y) {
                prop_assert!(klein_form(&l.pl).is_zero());
            }
        }
    }

    #[test]
    fn plane_line_meet_lies_on_both(a in prop::collection::vec(rat(), 4), p in vec3(), q in vec3()) {
        let (Ok(pi), Ok(ln)) = (FlatH::new(a), AffLine::through(&p, &q)) else { return Ok(()) };
        let pl = ln.to_plucker().unwrap();
        if let Ok(x) = plane_line_intersection(&pi, &pl) {
            prop_assert!(pi.eval(&x).is_zero());
            if let Some(aff) = x.to_affine() {
                prop_assert!(ln.contains(&aff));
            }
        }
    }

    #[test]
    fn line_canonical_form(p in vec3(), q in vec3(), t in rat()) {
        prop_assume!(p != q);
        let l = AffLine::through(&p, &q).unwrap();
        prop_assert_eq!(&AffLine::through(&q, &p).unwrap(), &l);
        prop_assert!(l.contains(&p) && l.contains(&q));
        let r = l.point_at(&t);
        prop_assert_eq!(&l.param_of(&r), &t);
        if r != p {
            prop_assert_eq!(AffLine::through(&p, &r).unwrap(), l);
        }
    }

    #[test]
    fn line_relation_is_symmetric(a in grid_line(), b in grid_line()) {
        prop_assert_eq!(line_relation(&a, &b).unwrap(), line_relation(&b, &a).unwrap());
        if let LineRelation::Intersecting(p) = line_relation(&a, &b).unwrap() {
            prop_assert!(a.contains(&p) && b.contains(&p));
        }
    }

    #[test]
    fn spanning_flat_matches_relation(a in line(), b in prop_oneof![line(), grid_line()]) {
        let rel = line_relation(&a, &b).unwrap();
        match Flat2::spanned_by(&a, &b) {
            Some(f) => {
                prop_assert!(rel.is_coplanar());
                prop_assert!(f.contains_line(&a) && f.contains_line(&b));
            }
            None => prop_assert!(matches!(rel, LineRelation::Skew | LineRelation::Equal)),
        }
    }

    #[test]
    fn coplanar_triple_ignores_order(a in grid_line(), b in grid_line(), c in grid_line()) {
        let x = coplanar_triple(&a, &b, &c).unwrap();
        prop_assert_eq!(coplanar_triple(&b, &a, &c).unwrap(), x);
        prop_assert_eq!(coplanar_triple(&c, &b, &a).unwrap(), x);
        prop_assert_eq!(coplanar_triple(&a, &c, &b).unwrap(), x);
    }

    #[test]
    fn projection_kills_direction(v in prop::collection::vec(rat(), 5), w in prop::collection::vec(rat(), 5), c in rat()) {
        prop_assume!(w.iter().any(|x| !x.is_zero()));
        prop_assert!(project_vector(&w, &w).iter().all(Zero::is_zero));
        let shifted: Vec<Rat> = v.iter().zip(&w).map(|(a, b)| a + &c * b).collect();
        prop_assert_eq!(project_vector(&shifted, &w), project_vector(&v, &w));
        prop_assert_eq!(project_vector(&v, &w).len(), 4);
    }

    #[test]
    fn double_counting(points in prop::collection::vec(grid3(), 0..12), lines in prop::collection::vec(grid_line(), 0..8)) {
        let i = count_incidences(&points, &lines);
        prop_assert_eq!(points_per_line(&points, &lines).iter().sum::<usize>(), i);
        prop_assert_eq!(lines_per_point(&points, &lines).iter().sum::<usize>(), i);
    }

    #[test]
    fn s_statistic_range(mut lines in prop::collection::vec(grid_line(), 0..8)) {
        lines.sort();
        lines.dedup();
        let s = max_lines_per_flat(&lines);
        prop_assert!(s <= lines.len());
        prop_assert_eq!(s == 0, lines.is_empty());
    }

    #[test]
    fn gcd_divides_both(f in poly(), g in poly(), h in poly()) {
        prop_assume!(!h.is_zero());
        let a = f.clone() * h.clone();
        let b = g.clone() * h.clone();
        let d = gcd(&a, &b);
        if !d.is_zero() {
            prop_assert!(divides(&d, &a).unwrap());
            prop_assert!(divides(&d, &b).unwrap());
            if !a.is_zero() && !b.is_zero() {
                prop_assert!(divides(&h, &d).unwrap());
            }
        }
    }

    #[test]
    fn division_inverts_product(f in poly(), g in poly()) {
        prop_assume!(!g.is_zero());
        let (q, r) = (f.clone() * g.clone()).div_rem(&g).unwrap();
        prop_assert!(r.is_zero());
        prop_assert_eq!(q, f);
    }

    #[test]
    fn rhs_main_is_monotone(m in 1usize..400, n in 1usize..200, d in 2u32..10, s in 1usize..10) {
        let base = rhs_main(m, n, d, s);
        prop_assert!(rhs_main(m + 1, n, d, s) >= base);
        prop_assert!(rhs_main(m, n + 1, d, s) >= base);
        prop_assert!(rhs_main(m, n, d, s + 1) >= base);
    }

    #[test]
    fn generated_lines_lie_on_surface(seed in 0u64..1000, idx in 0usize..4) {
        let kinds = ["cone", "regulus", "whitney", "product:cone,regulus@(1,1,0)"];
        let spec = InstanceSpec {
            surface: kinds[idx].parse::<SurfaceSpec>().unwrap(),
            line_count: 6,
            points_per_line: 3,
            seed,
            dim: 3,
            with_axis: idx == 2,
            include_apex: false,
        };
        let (surface, points, lines) = forge::generate(&spec).unwrap();
        for l in &lines {
            prop_assert!(ruledinc::linespace::line_on_surface(surface.f(), l));
        }
        for p in &points {
            prop_assert!(surface.f().eval(p).unwrap().is_zero());
        }
        let inst = Instance { dim: 3, surface, points, lines };
        let back = Instance::from_json(&inst.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.points, inst.points);
        prop_assert_eq!(back.lines, inst.lines);
    }
}
