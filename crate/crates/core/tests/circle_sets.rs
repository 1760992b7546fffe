use num_rational::Rational64;
use proptest::prelude::*;
use rotalg_core::circle_sets::{CirclePoint, CircleSet, Component, SetClass};
use rotalg_core::diophantine::Angle;

fn r(num: i64, den: i64) -> CirclePoint {
    CirclePoint::rational(num, den)
}

fn arc(a: CirclePoint, b: CirclePoint) -> CircleSet {
    CircleSet::arc(a, b)
}

/// Float membership, trusted only away from component endpoints.
fn float_member(set: &CircleSet, x: f64, angle: &Angle) -> Option<bool> {
    let eps = 1e-9;
    match set {
        CircleSet::Full => Some(true),
        CircleSet::Components(cs) => {
            let mut inside = false;
            for c in cs {
                match c {
                    Component::Point(p) => {
                        let d = (x - p.position(angle)).rem_euclid(1.0);
                        if d.min(1.0 - d) < eps {
                            return None;
                        }
                    }
                    Component::Arc { start, end } => {
                        let s = start.position(angle);
                        let e = end.position(angle);
                        for t in [s, e] {
                            let d = (x - t).rem_euclid(1.0);
                            if d.min(1.0 - d) < eps {
                                return None;
                            }
                        }
                        let len = (e - s).rem_euclid(1.0);
                        if (x - s).rem_euclid(1.0) <= len {
                            inside = true;
                        }
                    }
                }
            }
            Some(inside)
        }
    }
}

fn point_strategy() -> impl Strategy<Value = CirclePoint> {
    (0i64..12, 1i64..12, -4i64..5).prop_map(|(a, b, n)| CirclePoint::new(Rational64::new(a, b), n))
}

fn component_strategy() -> impl Strategy<Value = Component> {
    prop_oneof![point_strategy().prop_map(Component::Point), (point_strategy(), point_strategy()).prop_map(|(a, b)| Component::arc(a, b)),]
}

fn set_strategy() -> impl Strategy<Value = Vec<Component>> {
    prop::collection::vec(component_strategy(), 0..4)
}

#[test]
fn union_of_overlapping_arcs_covers_circle() {
    let g = Angle::golden();
    let a = arc(r(0, 1), r(6, 10));
    let b = arc(r(5, 10), r(1, 10));
    assert_eq!(a.union(&b, &g), CircleSet::Full);
}

#[test]
fn intersection_of_arcs() {
    let g = Angle::golden();
    let a = arc(r(0, 1), r(3, 10));
    let b = arc(r(2, 10), r(5, 10));
    assert_eq!(a.intersect(&b, &g), arc(r(2, 10), r(3, 10)));
}

#[test]
fn degenerate_arc_is_a_point() {
    let g = Angle::golden();
    let p = CirclePoint::new(Rational64::new(1, 3), 2);
    let s = CircleSet::from_components(vec![Component::arc(p, p)], &g);
    assert_eq!(s, CircleSet::point(p));
    assert_eq!(s.classify(), SetClass::FinitePoints);
}

#[test]
fn points_compare_by_exact_position() {
    let g = Angle::golden();
    // 1/2 - ρ + 1 ≈ 0.882 and ρ ≈ 0.618 and 1/3 ≈ 0.333
    let set = CircleSet::points([CirclePoint::new(Rational64::new(1, 2), -1), CirclePoint::orbit(1), r(1, 3)], &g);
    let starts: Vec<f64> = set.components().iter().map(|c| c.start().position(&g)).collect();
    assert!(starts.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(set.components().len(), 3);
    // q is reduced mod 1, so 4/3 + 0ρ is the same point as 1/3
    assert_eq!(CirclePoint::new(Rational64::new(4, 3), 0), r(1, 3));
}

#[test]
fn rotation_moves_orbit_index() {
    let g = Angle::golden();
    let p = CirclePoint::new(Rational64::new(1, 5), 0);
    assert_eq!(CircleSet::point(p).rotate(3, &g), CircleSet::point(CirclePoint::new(Rational64::new(1, 5), 3)));
    let wrapped = arc(r(9, 10), r(1, 10));
    assert!(wrapped.contains_point(CirclePoint::zero(), &g));
    assert!((wrapped.measure(&g) - 0.2).abs() < 1e-12);
}

#[test]
fn classify_examples() {
    let g = Angle::golden();
    assert_eq!(CircleSet::empty().classify(), SetClass::Empty);
    assert_eq!(CircleSet::Full.classify(), SetClass::Full);
    assert_eq!(arc(r(0, 1), r(1, 2)).classify(), SetClass::HasInterior);
    assert_eq!(CircleSet::points([r(0, 1), CirclePoint::orbit(1)], &g).classify(), SetClass::FinitePoints);
}

#[test]
fn covering_index_examples() {
    let g = Angle::golden();
    let p = arc(r(0, 1), r(7, 10));
    assert_eq!(p.covering_index(1, &g), Some(2));
    assert_eq!(CircleSet::Full.covering_index(1, &g), Some(1));
    assert_eq!(CircleSet::point(r(0, 1)).covering_index(1, &g), None);
    // brute force float check for a narrower arc
    let narrow = arc(r(0, 1), r(1, 10));
    let n = narrow.covering_index(1, &g).unwrap();
    let covered = |k: usize| {
        (0..10_000).all(|i| {
            let x = (i as f64 + 0.5) / 10_000.0;
            (0..k).any(|j| ((x + j as f64 * g.approx()).rem_euclid(1.0)) <= 0.1)
        })
    };
    assert!(covered(n));
    assert!(!covered(n - 1));
}

#[test]
fn json_round_trip() {
    let g = Angle::golden();
    let set = CircleSet::from_components(
        vec![Component::Point(CirclePoint::new(Rational64::new(1, 3), 2)), Component::arc(r(1, 10), r(2, 10))],
        &g,
    );
    let text = serde_json::to_string(&set).unwrap();
    assert!(text.contains("\"pt\"") && text.contains("\"1/3\""));
    let back: CircleSet = serde_json::from_str(&text).unwrap();
    assert_eq!(back.normalize(&g), set);
    let full: CircleSet = serde_json::from_str(r#"{"full":true}"#).unwrap();
    assert!(full.is_full());
    let empty: CircleSet = serde_json::from_str(r#"{"components":[]}"#).unwrap();
    assert!(empty.is_empty());
}

#[test]
fn svg_mentions_every_component() {
    let g = Angle::golden();
    let set = CircleSet::from_components(vec![Component::Point(r(1, 4)), Component::arc(r(1, 2), r(3, 4))], &g);
    let svg = set.to_svg(&g, 200);
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<path").count(), 1);
    assert_eq!(svg.matches("r=\"3\"").count(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn boolean_ops_match_sampling(a in set_strategy(), b in set_strategy()) {
        let g = Angle::golden();
        let sa = CircleSet::from_components(a, &g);
        let sb = CircleSet::from_components(b, &g);
        let u = sa.union(&sb, &g);
        let i = sa.intersect(&sb, &g);
        for k in 0..257 {
            let x = (k as f64 + 0.37) / 257.0;
            if let (Some(ma), Some(mb), Some(mu), Some(mi)) =
                (float_member(&sa, x, &g), float_member(&sb, x, &g), float_member(&u, x, &g), float_member(&i, x, &g))
            {
                prop_assert_eq!(mu, ma || mb);
                prop_assert_eq!(mi, ma && mb);
            }
        }
    }

    #[test]
    fn lattice_laws(a in set_strategy(), b in set_strategy(), c in set_strategy()) {
        let g = Angle::golden();
        let (a, b, c) = (CircleSet::from_components(a, &g), CircleSet::from_components(b, &g), CircleSet::from_components(c, &g));
        prop_assert_eq!(a.union(&b, &g), b.union(&a, &g));
        prop_assert_eq!(a.intersect(&b, &g), b.intersect(&a, &g));
        prop_assert_eq!(a.union(&b, &g).union(&c, &g), a.union(&b.union(&c, &g), &g));
        prop_assert_eq!(
            a.intersect(&b.union(&c, &g), &g),
            a.intersect(&b, &g).union(&a.intersect(&c, &g), &g)
        );
        prop_assert_eq!(a.union(&a, &g), a.clone());
        prop_assert!(a.intersect(&b, &g).is_subset(&a, &g));
        prop_assert!(a.is_subset(&a.union(&b, &g), &g));
    }

    #[test]
    fn rotation_is_a_lattice_automorphism(a in set_strategy(), b in set_strategy(), k in -6i64..7) {
        let g = Angle::sqrt2_minus_one();
        let (a, b) = (CircleSet::from_components(a, &g), CircleSet::from_components(b, &g));
        prop_assert_eq!(a.union(&b, &g).rotate(k, &g), a.rotate(k, &g).union(&b.rotate(k, &g), &g));
        prop_assert_eq!(a.intersect(&b, &g).rotate(k, &g), a.rotate(k, &g).intersect(&b.rotate(k, &g), &g));
        prop_assert_eq!(a.rotate(k, &g).rotate(-k, &g), a);
    }

    #[test]
    fn normal_form_ignores_input_order(mut comps in set_strategy()) {
        let g = Angle::golden();
        let forward = CircleSet::from_components(comps.clone(), &g);
        comps.reverse();
        prop_assert_eq!(CircleSet::from_components(comps, &g), forward);
    }
}
